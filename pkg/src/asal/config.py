"""Flat key/value settings to learner configuration objects.

The CLI and the estimator both accept a flat mapping (from flags or a JSON
file); this module is the single place that turns it into config dataclasses.
"""
from __future__ import annotations

import json
from pathlib import Path

from .automaton import Semantics
from .incremental import IncrConfig
from .objective import ConfigError, ObjectiveConfig, StructuralConfig
from .sax import SaxConfig
from .search import BatchConfig

STRUCTURAL_KEYS = ("max_states", "accepting_absorbing", "start_not_accepting", "max_transitions")
OBJECTIVE_KEYS = ("w_fp", "w_fn", "transition_penalty", "earliness", "earliness_mode", "balance")
SEMANTICS_KEYS = ("policy", "acceptance")
BATCH_KEYS = ("kinds", "full_alphabet", "timeout", "seed", "restarts", "max_sideways", "max_moves")
INCR_KEYS = ("batch_size", "error_threshold", "per_batch_timeout", "k_best", "iterations", "shuffle_seed",
             "compare")
SAX_KEYS = ("alphabet_size", "breakpoint_mode", "paa_window", "normalize")
KNOWN_KEYS = frozenset(STRUCTURAL_KEYS + OBJECTIVE_KEYS + SEMANTICS_KEYS + BATCH_KEYS + INCR_KEYS + SAX_KEYS)


def _pick(settings: dict, keys) -> dict:
    return {k: settings[k] for k in keys if settings.get(k) is not None}


def _build(cls, kwargs):
    try:
        return cls(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid {cls.__name__} setting: {exc}") from exc


def check_keys(settings: dict):
    unknown = sorted(set(settings) - KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")


def batch_config(settings: dict) -> BatchConfig:
    check_keys(settings)
    sem = _build(Semantics, _pick(settings, SEMANTICS_KEYS))
    obj = _build(ObjectiveConfig, _pick(settings, OBJECTIVE_KEYS))
    obj.check(sem)
    return _build(BatchConfig, dict(structural=_build(StructuralConfig, _pick(settings, STRUCTURAL_KEYS)),
                                    objective=obj, semantics=sem, **_pick(settings, BATCH_KEYS)))


def incr_config(settings: dict) -> IncrConfig:
    return _build(IncrConfig, dict(batch=batch_config(settings), **_pick(settings, INCR_KEYS)))


def learner_config(learner: str, settings: dict):
    if learner == "batch":
        return batch_config(settings)
    if learner == "incremental":
        return incr_config(settings)
    raise ConfigError(f"unknown learner {learner!r} (expected batch or incremental)")


def sax_config(settings: dict) -> SaxConfig:
    check_keys(settings)
    return _build(SaxConfig, _pick(settings, SAX_KEYS))


def load_config_file(path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a JSON object")
    check_keys(data)
    return data
