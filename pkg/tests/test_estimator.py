import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.model_selection import cross_val_score
from sklearn.pipeline import make_pipeline

from asal.core import ConfigError
from asal.estimator import ASALClassifier, SAXTransformer, as_sequences
from asal.planted import PlantedModelSpec, generate_planted

FAST = dict(timeout=10, restarts=10, acceptance="earliest")


@pytest.fixture(scope="module")
def planted():
    ds, asa = generate_planted(PlantedModelSpec(n_pos=60, n_neg=60, seed=12))
    return [ex.mvs for ex in ds], np.array([ex.positive for ex in ds]), asa


def test_params_round_trip():
    clf = ASALClassifier(max_states=3, kinds="eq", seed=4)
    assert clf.get_params()["max_states"] == 3
    twin = clone(clf)
    assert twin.get_params() == clf.get_params()
    assert clf.set_params(w_fp=2) is clf and clf.w_fp == 2


def test_fit_predict_on_planted(planted):
    X, y, _ = planted
    clf = ASALClassifier(**FAST).fit(X, y)
    assert clf.score(X, y) == 1.0
    assert clf.n_states_ == 2 and clf.report_.cost.error == 0
    assert set(clf.classes_) == {False, True}
    times = clf.accept_times(X[:5])
    assert all((t is None) != bool(p) for t, p in zip(times, clf.predict(X[:5])))


def test_string_labels_and_array_input(toy):
    X = np.array([[list(col) for col in zip(*(ex.mvs.values[a] for a in toy.attributes))] for ex in toy])
    assert X.shape == (2, 10, 3)
    y = ["pos", "neg"]
    clf = ASALClassifier(timeout=5, restarts=5, attributes=list(toy.attributes)).fit(X, y)
    assert list(clf.predict(X)) == y


def test_incremental_learner(planted):
    X, y, _ = planted
    clf = ASALClassifier(learner="incremental", batch_size=40, **FAST).fit(X, y)
    assert clf.score(X, y) >= 0.95
    assert clf.report_.log


def test_sklearn_cross_validation(planted):
    X, y, _ = planted
    scores = cross_val_score(ASALClassifier(**FAST), X, y, cv=3, scoring="f1")
    assert scores.mean() >= 0.9


def test_errors(planted, toy):
    X, y, _ = planted
    with pytest.raises(NotFittedError):
        ASALClassifier().predict(X)
    with pytest.raises(ConfigError):
        ASALClassifier(max_states=0).fit(X, y)
    with pytest.raises(ConfigError):
        ASALClassifier(learner="magic").fit(X, y)
    with pytest.raises(ValueError):
        ASALClassifier().fit(X, y[:-1])
    clf = ASALClassifier(**FAST).fit(X, y)
    with pytest.raises(ValueError):
        clf.predict([ex.mvs for ex in toy])  # other attributes and symbols


def test_sax_pipeline():
    rng = np.random.default_rng(0)
    n, length = 80, 12
    X = rng.normal(size=(n, length, 2))
    y = np.zeros(n, dtype=bool)
    y[: n // 2] = True
    X[: n // 2, 3, 0] += 6.0  # a spike early in the series marks the positives
    pipe = make_pipeline(SAXTransformer(alphabet_size=4, breakpoint_mode="uniform_range", normalize="none",
                                        fit_range=True),
                         ASALClassifier(alphabet="abcd", **FAST))
    pipe.fit(X, y)
    assert pipe.score(X, y) >= 0.95


def test_sax_transformer_shapes():
    X = np.arange(24, dtype=float).reshape(2, 6, 2)
    out = SAXTransformer(alphabet_size=3, paa_window=2).fit_transform(X)
    assert len(out) == 2 and out[0].length == 3 and out[0].attributes == ("x1", "x2")
    with pytest.raises(NotFittedError):
        SAXTransformer().transform(X)


def test_as_sequences_rejects_flat_arrays():
    with pytest.raises(ValueError):
        as_sequences(np.zeros((3, 4)))
