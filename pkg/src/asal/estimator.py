"""scikit-learn wrappers: an automaton classifier and a SAX transformer."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.exceptions import NotFittedError

from .automaton import Asa, Semantics, run
from .compiled import CompiledDataset
from .config import learner_config
from .core import AlphabetSpec, AttributeSet, Dataset, Label, LabeledExample, Mvs, validate_dataset
from .evaluation import learn, model_size
from .sax import RawSeries, SaxConfig, discretize


def _attr_names(n: int, attributes) -> tuple[str, ...]:
    if attributes is not None:
        names = tuple(attributes)
        if len(names) != n:
            raise ValueError(f"expected {n} attribute names, got {len(names)}")
        return names
    return tuple(f"x{i + 1}" for i in range(n))


def as_sequences(X, attributes=None, numeric: bool = False) -> list:
    """Coerce ``X`` to a list of ``Mvs`` (or ``RawSeries`` when ``numeric``).

    ``X`` is either a sequence of such objects or an array of shape
    (n_sequences, length, n_attributes).
    """
    if isinstance(X, (list, tuple)) and all(isinstance(x, (Mvs, RawSeries)) for x in X):
        return list(X)
    arr = np.asarray(X, dtype=float if numeric else object)
    if arr.ndim != 3:
        raise ValueError(f"expected a list of sequences or a 3-d array, got shape {arr.shape}")
    names = _attr_names(arr.shape[2], attributes)
    out = []
    for i, seq in enumerate(arr):
        if numeric:
            out.append(RawSeries(str(i), {a: [float(v) for v in seq[:, j]] for j, a in enumerate(names)}))
        else:
            out.append(Mvs(str(i), {a: tuple(str(v) for v in seq[:, j]) for j, a in enumerate(names)}))
    return out


def _positive_flags(y, pos_label):
    y = np.asarray(y)
    classes = np.unique(y)
    if len(classes) > 2:
        raise ValueError(f"binary labels expected, got {len(classes)} classes")
    if pos_label is None:
        for candidate in (Label.POSITIVE.value, True, 1):
            if any(c == candidate for c in classes):
                pos_label = candidate
                break
        else:
            raise ValueError("cannot tell which label is positive; set pos_label")
    return y == pos_label, classes, pos_label


class ASALClassifier(ClassifierMixin, BaseEstimator):
    """Learn an answer set automaton; a sequence is positive iff it is accepted.

    Parameters mirror the flat configuration keys of the command-line tool.
    ``learner`` is ``"batch"`` (anytime local search on the whole set) or
    ``"incremental"`` (mini-batch revision).
    """

    def __init__(self, learner="batch", max_states=2, kinds="symbolic", policy="strict_contiguity",
                 acceptance="end_of_sequence", accepting_absorbing=False, start_not_accepting=False,
                 max_transitions=None, w_fp=1, w_fn=1, transition_penalty=1, earliness=False,
                 earliness_mode="sum_all_accept_steps", balance=False, full_alphabet=False, timeout=60.0,
                 restarts=100, max_sideways=10, batch_size=50, error_threshold=0.0, per_batch_timeout=5.0,
                 k_best=3, iterations=3, alphabet=None, attributes=None, pos_label=None, seed=0):
        self.learner = learner
        self.max_states = max_states
        self.kinds = kinds
        self.policy = policy
        self.acceptance = acceptance
        self.accepting_absorbing = accepting_absorbing
        self.start_not_accepting = start_not_accepting
        self.max_transitions = max_transitions
        self.w_fp = w_fp
        self.w_fn = w_fn
        self.transition_penalty = transition_penalty
        self.earliness = earliness
        self.earliness_mode = earliness_mode
        self.balance = balance
        self.full_alphabet = full_alphabet
        self.timeout = timeout
        self.restarts = restarts
        self.max_sideways = max_sideways
        self.batch_size = batch_size
        self.error_threshold = error_threshold
        self.per_batch_timeout = per_batch_timeout
        self.k_best = k_best
        self.iterations = iterations
        self.alphabet = alphabet
        self.attributes = attributes
        self.pos_label = pos_label
        self.seed = seed

    def _settings(self) -> dict:
        params = self.get_params()
        for key in ("learner", "alphabet", "attributes", "pos_label"):
            params.pop(key)
        if self.learner == "incremental":
            params["shuffle_seed"] = self.seed
        else:
            for key in ("batch_size", "error_threshold", "per_batch_timeout", "k_best", "iterations"):
                params.pop(key)
        return params

    def _dataset(self, seqs, flags, alphabet=None, attributes=None) -> Dataset:
        examples = tuple(LabeledExample(m, Label.POSITIVE if f else Label.NEGATIVE) for m, f in zip(seqs, flags))
        if attributes is None:
            attributes = AttributeSet(tuple(seqs[0].attributes)) if seqs else AttributeSet(())
        if alphabet is None:
            alphabet = AlphabetSpec(tuple(sorted({s for m in seqs for v in m.values.values() for s in v})))
        ds = Dataset(examples, alphabet, attributes)
        problems = validate_dataset(ds)
        if problems:
            raise ValueError("; ".join(problems[:5]))
        return ds

    def fit(self, X, y):
        seqs = as_sequences(X, self.attributes)
        flags, self.classes_, self.pos_label_ = _positive_flags(y, self.pos_label)
        if len(seqs) != len(flags):
            raise ValueError(f"X has {len(seqs)} sequences but y has {len(flags)} labels")
        alphabet = self.alphabet
        if alphabet is not None and not isinstance(alphabet, AlphabetSpec):
            alphabet = AlphabetSpec(tuple(alphabet))
        cfg = learner_config(self.learner, self._settings())
        ds = self._dataset(seqs, flags, alphabet)
        self.report_ = learn(ds, self.learner, cfg)
        self.asa_: Asa = self.report_.asa
        self.semantics_: Semantics = cfg.semantics if self.learner == "batch" else cfg.batch.semantics
        self.alphabet_ = ds.alphabet
        self.attributes_ = ds.attributes
        self.n_states_, self.n_transitions_ = model_size(self.asa_)
        return self

    def _check_fitted(self):
        if not hasattr(self, "asa_"):
            raise NotFittedError("ASALClassifier is not fitted yet; call fit first")

    def decision_function(self, X) -> np.ndarray:
        """1.0 for accepted sequences, 0.0 otherwise."""
        self._check_fitted()
        seqs = as_sequences(X, self.attributes)
        if not seqs:
            return np.zeros(0)
        ds = self._dataset(seqs, [False] * len(seqs), self.alphabet_, self.attributes_)
        return CompiledDataset(ds).predict(self.asa_, self.semantics_).astype(float)

    def predict(self, X) -> np.ndarray:
        accepted = self.decision_function(X).astype(bool)
        negative = [c for c in self.classes_ if c != self.pos_label_]
        neg_label = negative[0] if negative else Label.NEGATIVE.value
        return np.array([self.pos_label_ if a else neg_label for a in accepted])

    def accept_times(self, X) -> list:
        """First accepting step per sequence (None when rejected)."""
        self._check_fitted()
        return [run(self.asa_, m, self.semantics_, self.alphabet_).first_accept_time
                for m in as_sequences(X, self.attributes)]


class SAXTransformer(TransformerMixin, BaseEstimator):
    """Discretize real-valued multivariate series into symbolic sequences.

    With ``fit_range=True`` and uniform breakpoints, ``fit`` records each
    attribute's (min, max) over the training series and reuses it in
    ``transform``; otherwise every sequence is binned on its own.
    """

    def __init__(self, alphabet_size=10, breakpoint_mode="gaussian_equiprobable", paa_window=1,
                 normalize="per_sequence_per_attribute_zscore", fit_range=False, attributes=None):
        self.alphabet_size = alphabet_size
        self.breakpoint_mode = breakpoint_mode
        self.paa_window = paa_window
        self.normalize = normalize
        self.fit_range = fit_range
        self.attributes = attributes

    def _config(self) -> SaxConfig:
        return SaxConfig(self.alphabet_size, self.breakpoint_mode, self.paa_window, self.normalize)

    def fit(self, X, y=None):
        self.config_ = self._config()
        self.alphabet_ = AlphabetSpec.letters(self.alphabet_size)
        self.value_range_ = None
        if self.fit_range:
            series = as_sequences(X, self.attributes, numeric=True)
            ranges: dict = {}
            for s in series:
                for attr, vals in s.values.items():
                    lo, hi = ranges.get(attr, (np.inf, -np.inf))
                    ranges[attr] = (min(lo, float(np.min(vals))), max(hi, float(np.max(vals))))
            self.value_range_ = ranges
        return self

    def transform(self, X) -> list[Mvs]:
        if not hasattr(self, "config_"):
            raise NotFittedError("SAXTransformer is not fitted yet; call fit first")
        series = as_sequences(X, self.attributes, numeric=True)
        return [discretize(s, self.config_, self.alphabet_, self.value_range_) for s in series]
