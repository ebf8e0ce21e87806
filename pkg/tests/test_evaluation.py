import random

import numpy as np
import pytest

from asal.automaton import Semantics
from asal.core import ConfigError, Dataset, Label, LabeledExample
from asal.evaluation import cross_validate, fingerprint, model_size, scores, stratified_folds
from asal.incremental import IncrConfig
from asal.planted import PlantedModelSpec, generate_planted
from asal.search import BatchConfig

SEM = Semantics("strict_contiguity", "earliest")


def test_scores_conventions():
    assert scores([True, False], [True, False]) == {"precision": 1.0, "recall": 1.0, "f1": 1.0}
    assert scores([True, True], [False, False]) == {"precision": 0.0, "recall": 0.0, "f1": 0.0}
    s = scores([True, True, False, False], [True, False, True, False])
    assert s["f1"] == pytest.approx(2 * 0.5 * 0.5 / 1.0)


def test_model_size_counts_incident_states(necrosis):
    assert model_size(necrosis) == (2, 3)


def test_fold_preconditions(toy):
    with pytest.raises(ConfigError):
        stratified_folds(toy, 1, 0)
    with pytest.raises(ConfigError, match="positives"):
        stratified_folds(toy, 2, 0)


def test_stratification_preserves_class_ratio():
    ds, _ = generate_planted(PlantedModelSpec(n_pos=37, n_neg=63, seed=0))
    splits = stratified_folds(ds, 5, 3)
    assert sorted(i for _, te in splits for i in te) == list(range(100))
    for train, test in splits:
        pos = sum(ds.examples[i].positive for i in test)
        assert abs(pos - 37 / 5) <= 1
        assert not set(train) & set(test)


def test_perfect_planted_data_scores_one():
    ds, _ = generate_planted(PlantedModelSpec(n_pos=100, n_neg=100, seed=1))
    report = cross_validate(ds, "batch", BatchConfig(semantics=SEM, timeout=30, restarts=20), folds=5, seed=0)
    assert report.f1 == pytest.approx(1.0)
    assert len(report.folds) == 5
    summary = report.summary()
    assert summary["fingerprint"] == report.fingerprint and len(summary["folds"]) == 5


def test_metrics_recomputable_from_predictions():
    ds, _ = generate_planted(PlantedModelSpec(n_pos=40, n_neg=40, noise=0.2, seed=3))
    report = cross_validate(ds, "batch", BatchConfig(semantics=SEM, timeout=10, restarts=5), folds=4, seed=1)
    rows = report.predictions()
    assert len(rows) == len(ds)
    for fold in report.folds:
        mine = [(y, p) for f, _, y, p in rows if f == fold.fold]
        assert scores([y for y, _ in mine], [p for _, p in mine])["f1"] == pytest.approx(fold.f1)


def test_random_labels_score_near_base_rate():
    ds, _ = generate_planted(PlantedModelSpec(n_pos=250, n_neg=250, seed=8))
    rng = random.Random(0)
    labels = [ex.label for ex in ds]
    rng.shuffle(labels)
    shuffled = Dataset(tuple(LabeledExample(ex.mvs, lab) for ex, lab in zip(ds, labels)), ds.alphabet, ds.attributes)
    report = cross_validate(shuffled, "batch", BatchConfig(semantics=SEM, timeout=10, restarts=5), folds=5, seed=0)
    assert abs(report.f1 - 0.5) <= 0.15


def test_incremental_learner_and_workers_agree():
    ds, _ = generate_planted(PlantedModelSpec(n_pos=30, n_neg=30, seed=6))
    cfg = IncrConfig(BatchConfig(semantics=SEM, restarts=5), batch_size=20, iterations=1)
    one = cross_validate(ds, "incremental", cfg, folds=3, seed=2, workers=1)
    two = cross_validate(ds, "incremental", cfg, folds=3, seed=2, workers=2)
    assert [f.model for f in one.folds] == [f.model for f in two.folds]
    assert one.fingerprint == two.fingerprint


def test_fingerprint_depends_on_config():
    assert fingerprint(BatchConfig(seed=1)) == fingerprint(BatchConfig(seed=1))
    assert fingerprint(BatchConfig(seed=1)) != fingerprint(BatchConfig(seed=2))


def test_unknown_learner(toy):
    with pytest.raises(ConfigError):
        cross_validate(toy.subset([0, 1, 0, 1]), "magic", BatchConfig(), folds=2)
