"""Stratified cross-validation, classification metrics and run fingerprints."""
from __future__ import annotations

import dataclasses
import enum
import hashlib
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from sklearn.metrics import precision_recall_fscore_support
from sklearn.model_selection import StratifiedKFold

from .automaton import Asa
from .compiled import CompiledDataset
from .core import Dataset
from .incremental import IncrConfig, learn_incremental
from .objective import ConfigError
from .search import BatchConfig, local_search

WORKERS_ENV = "ASAL_WORKERS"


def scores(y_true, y_pred) -> dict:
    """Precision, recall and F1 of the positive class; each is 0 when undefined."""
    p, r, f, _ = precision_recall_fscore_support(np.asarray(y_true, dtype=bool), np.asarray(y_pred, dtype=bool),
                                                 average="binary", zero_division=0)
    return {"precision": float(p), "recall": float(r), "f1": float(f)}


def model_size(asa: Asa) -> tuple[int, int]:
    """(#states, #transitions): states counted as q0 plus states touching a transition."""
    return len(asa.used_states()), len(asa.transitions)


def _jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: _jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (frozenset, set)):
        return sorted(_jsonable(x) for x in obj)
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    return obj


def fingerprint(*configs) -> str:
    blob = json.dumps([_jsonable(c) for c in configs], sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def learn(dataset: Dataset, learner: str, cfg):
    if learner == "batch":
        return local_search(dataset, cfg)
    if learner == "incremental":
        if cfg.batch_size > len(dataset):
            cfg = dataclasses.replace(cfg, batch_size=len(dataset))
        return learn_incremental(dataset, cfg)
    raise ConfigError(f"unknown learner {learner!r}")


def _semantics(cfg):
    return cfg.semantics if isinstance(cfg, BatchConfig) else cfg.batch.semantics


@dataclass
class FoldResult:
    fold: int
    precision: float
    recall: float
    f1: float
    states: int
    transitions: int
    minutes: float
    model: str
    predictions: list  # (seq_id, true_positive_label, predicted_positive)


@dataclass
class EvalReport:
    folds: list = field(default_factory=list)
    fingerprint: str = ""

    def _mean(self, name):
        return float(np.mean([getattr(f, name) for f in self.folds])) if self.folds else 0.0

    @property
    def f1(self):
        return self._mean("f1")

    @property
    def precision(self):
        return self._mean("precision")

    @property
    def recall(self):
        return self._mean("recall")

    @property
    def states(self):
        return self._mean("states")

    @property
    def transitions(self):
        return self._mean("transitions")

    @property
    def minutes(self):
        return self._mean("minutes")

    def summary(self) -> dict:
        return {"f1": self.f1, "precision": self.precision, "recall": self.recall,
                "states": self.states, "transitions": self.transitions, "minutes": self.minutes,
                "fingerprint": self.fingerprint,
                "folds": [{k: v for k, v in dataclasses.asdict(f).items() if k != "predictions"}
                          for f in self.folds]}

    def predictions(self) -> list[tuple]:
        return [(f.fold, sid, y, p) for f in self.folds for sid, y, p in f.predictions]


def _run_fold(args):
    fold, dataset, train_idx, test_idx, learner, cfg = args
    train, test = dataset.subset(train_idx), dataset.subset(test_idx)
    t0 = time.perf_counter()
    report = learn(train, learner, cfg)
    minutes = (time.perf_counter() - t0) / 60.0
    pred = CompiledDataset(test).predict(report.asa, _semantics(cfg))
    truth = [ex.positive for ex in test]
    s = scores(truth, pred)
    states, transitions = model_size(report.asa)
    preds = [(ex.id, bool(y), bool(p)) for ex, y, p in zip(test, truth, pred)]
    return FoldResult(fold, s["precision"], s["recall"], s["f1"], states, transitions, minutes,
                      str(report.asa), preds)


def stratified_folds(dataset: Dataset, folds: int, seed: int) -> list[tuple[list[int], list[int]]]:
    if folds < 2:
        raise ConfigError("cross-validation needs at least 2 folds")
    labels = np.array([ex.positive for ex in dataset])
    counts = (int(labels.sum()), int((~labels).sum()))
    if min(counts) < folds:
        raise ConfigError(f"cannot stratify {counts[0]} positives / {counts[1]} negatives into {folds} folds: "
                          "a class would be absent from some fold")
    skf = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
    return [(list(tr), list(te)) for tr, te in skf.split(np.zeros(len(labels)), labels)]


def cross_validate(dataset: Dataset, learner: str = "batch", cfg=None, folds: int = 5, seed: int = 0,
                   workers: int | None = None) -> EvalReport:
    """Stratified k-fold evaluation; each fold trains on the rest and tests on itself."""
    if cfg is None:
        cfg = BatchConfig(seed=seed) if learner == "batch" else IncrConfig(BatchConfig(seed=seed))
    splits = stratified_folds(dataset, folds, seed)
    jobs = [(i, dataset, tr, te, learner, cfg) for i, (tr, te) in enumerate(splits)]
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_fold, jobs))
    else:
        results = [_run_fold(j) for j in jobs]
    return EvalReport(results, fingerprint(learner, cfg, folds, seed))
