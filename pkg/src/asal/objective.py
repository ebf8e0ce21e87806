"""Two-level lexicographic cost: training error first, then model regularization."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Mapping, NamedTuple

from .automaton import Asa, Semantics, run
from .compiled import CompiledDataset
from .core import ConfigError, Dataset


class EarlinessMode(str, enum.Enum):
    SUM_ALL_ACCEPT_STEPS = "sum_all_accept_steps"
    FIRST_ACCEPT_STEP = "first_accept_step"


class CostVector(NamedTuple):
    """Compared lexicographically, ``error`` first (tuple ordering does exactly that)."""

    error: int
    reg: int

    def __str__(self) -> str:
        return f"({self.error}, {self.reg})"


@dataclass(frozen=True)
class ObjectiveConfig:
    w_fp: int = 1
    w_fn: int = 1
    transition_penalty: int = 1
    earliness: bool = False
    earliness_mode: EarlinessMode = EarlinessMode.SUM_ALL_ACCEPT_STEPS
    balance: bool = False  # derive w_fp/w_fn from the class ratio

    def __post_init__(self):
        object.__setattr__(self, "earliness_mode", EarlinessMode(self.earliness_mode))
        if self.w_fp < 1 or self.w_fn < 1:
            raise ConfigError("error weights must be >= 1")
        if self.transition_penalty < 0:
            raise ConfigError("transition_penalty must be >= 0")

    def resolve(self, dataset: Dataset) -> "ObjectiveConfig":
        """Apply class-ratio weights when ``balance`` is set."""
        if not self.balance:
            return self
        n_pos, n_neg = len(dataset.positives), len(dataset.negatives)
        if not n_pos or not n_neg:
            return replace(self, balance=False)
        return replace(self, balance=False,
                       w_fn=max(1, round(n_neg / n_pos)), w_fp=max(1, round(n_pos / n_neg)))

    def check(self, sem: Semantics):
        if self.earliness and not sem.earliest:
            raise ConfigError("earliness regularization needs an earliest acceptance mode")


@dataclass(frozen=True)
class StructuralConfig:
    max_states: int = 2
    accepting_absorbing: bool = False
    start_not_accepting: bool = False
    max_transitions: int | None = None

    def __post_init__(self):
        if self.max_states < 1:
            raise ConfigError("max_states must be >= 1")
        if self.max_transitions is not None and self.max_transitions < 0:
            raise ConfigError("max_transitions must be >= 0")


def error_cost(asa: Asa, dataset: Dataset, sem: Semantics, cfg: ObjectiveConfig = ObjectiveConfig()) -> int:
    """Weighted count of misclassified examples, via the reference interpreter."""
    cost = 0
    for ex in dataset:
        accepted = run(asa, ex.mvs, sem, dataset.alphabet).accepted
        if ex.positive and not accepted:
            cost += cfg.w_fn
        elif not ex.positive and accepted:
            cost += cfg.w_fp
    return cost


def earliness_cost(asa: Asa, dataset: Dataset, sem: Semantics, cfg: ObjectiveConfig) -> int:
    total = 0
    for ex in dataset:
        res = run(asa, ex.mvs, sem, dataset.alphabet)
        if not res.accepted:
            continue
        if cfg.earliness_mode is EarlinessMode.FIRST_ACCEPT_STEP:
            total += res.first_accept_time
        else:
            total += sum(res.accepting_times(asa.accepting))
    return total


def reg_cost(asa: Asa, dataset: Dataset, sem: Semantics, cfg: ObjectiveConfig = ObjectiveConfig()) -> int:
    cfg.check(sem)
    cost = cfg.transition_penalty * len(asa.transitions)
    if cfg.earliness:
        cost += earliness_cost(asa, dataset, sem, cfg)
    return cost


def cost_vector(asa: Asa, dataset: Dataset, sem: Semantics, cfg: ObjectiveConfig = ObjectiveConfig()) -> CostVector:
    return CostVector(error_cost(asa, dataset, sem, cfg), reg_cost(asa, dataset, sem, cfg))


def check_structural(asa: Asa, cfg: StructuralConfig) -> list[str]:
    violations = []
    if asa.num_states > cfg.max_states:
        violations.append(f"{asa.num_states} states exceed the budget of {cfg.max_states}")
    if cfg.max_transitions is not None and len(asa.transitions) > cfg.max_transitions:
        violations.append(f"{len(asa.transitions)} transitions exceed the cap of {cfg.max_transitions}")
    if cfg.accepting_absorbing:
        for t in sorted(asa.transitions, key=lambda t: (t.src, t.dst, str(t.guard))):
            if t.src in asa.accepting and t.dst != t.src:
                violations.append(f"{t} leaves accepting state q{t.src}")
    if cfg.start_not_accepting and asa.start in asa.accepting:
        violations.append("accepting(q0). makes the start state accepting")
    return violations


@dataclass
class RemovalPenalties:
    """Regularization-level cost charged for each pre-existing fact a revision drops.

    ``transitions`` maps encoded transition triples to their removal cost
    (``-w`` for removal weight ``w``); ``accepting`` maps states to theirs.
    """

    transitions: Mapping[tuple, int] = field(default_factory=dict)
    accepting: Mapping[int, int] = field(default_factory=dict)

    def cost(self, transitions, accepting) -> int:
        c = 0
        for fact, w in self.transitions.items():
            if fact not in transitions:
                c += w
        for s, w in self.accepting.items():
            if s not in accepting:
                c += w
        return c


class Objective:
    """Fast cost evaluation of encoded candidates over a compiled dataset."""

    def __init__(self, data: CompiledDataset, cfg: ObjectiveConfig, sem: Semantics,
                 removal: RemovalPenalties | None = None):
        cfg = cfg.resolve(data.dataset)
        cfg.check(sem)
        self.data = data
        self.cfg = cfg
        self.sem = sem
        self.removal = removal
        self.evaluations = 0

    def __call__(self, num_states: int, transitions, accepting) -> CostVector:
        self.evaluations += 1
        d, cfg = self.data, self.cfg
        out = d.evaluate(num_states, transitions, accepting, self.sem)
        acc = out.accepted
        error = cfg.w_fn * (d.pos_mask & ~acc).bit_count() + cfg.w_fp * (d.neg_mask & acc).bit_count()
        reg = cfg.transition_penalty * len(transitions)
        if cfg.earliness:
            if cfg.earliness_mode is EarlinessMode.FIRST_ACCEPT_STEP:
                reg += out.earliness_first
            else:
                reg += out.earliness_all
        if self.removal is not None:
            reg += self.removal.cost(transitions, accepting)
        return CostVector(error, reg)

    def asa_cost(self, asa: Asa) -> CostVector:
        trans, acc = self.data.encode(asa)
        return self(asa.num_states, trans, acc)
