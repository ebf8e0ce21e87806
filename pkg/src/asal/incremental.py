"""Mini-batch learning by repeated minimal revision of a best-so-far automaton."""
from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field, replace

from .automaton import Asa, Semantics, run
from .compiled import CompiledDataset
from .core import Dataset
from .guards import GuardUniverse
from .objective import ConfigError, CostVector, Objective, RemovalPenalties
from .search import BatchConfig, LearnerReport, LocalSearch

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class IncrConfig:
    batch: BatchConfig = BatchConfig()
    batch_size: int = 50
    error_threshold: float = 0.0  # revise when the batch error rate exceeds this
    per_batch_timeout: float = 5.0
    k_best: int = 3
    iterations: int = 3
    shuffle_seed: int = 0
    compare: str = "cost"  # "cost": full CostVector, "error": error level only

    def __post_init__(self):
        if self.batch_size < 1 or self.k_best < 1 or self.iterations < 1:
            raise ConfigError("batch_size, k_best and iterations must be positive")
        if self.per_batch_timeout <= 0:
            raise ConfigError("per_batch_timeout must be positive")
        if not 0.0 <= self.error_threshold <= 1.0:
            raise ConfigError("error_threshold must lie in [0, 1]")
        if self.compare not in ("cost", "error"):
            raise ConfigError("compare must be 'cost' or 'error'")


@dataclass
class GuardStats:
    """Per transition fact: positives (``p``) and negatives (``n``) accepted through it."""

    counts: dict = field(default_factory=dict)  # Transition -> [p, n]

    def p(self, fact) -> int:
        return self.counts.get(fact, (0, 0))[0]

    def n(self, fact) -> int:
        return self.counts.get(fact, (0, 0))[1]

    def weight(self, fact) -> int:
        """Removal weight ``n - p``: positive when the fact mostly admits negatives."""
        return self.n(fact) - self.p(fact)


def guard_stats(asa: Asa, dataset: Dataset, sem: Semantics, witness: bool = False) -> GuardStats:
    counts = {t: [0, 0] for t in asa.transitions}
    for ex in dataset:
        res = run(asa, ex.mvs, sem, dataset.alphabet, witness=witness)
        if not res.accepted:
            continue
        col = 0 if ex.positive else 1
        for t in res.used_transitions:
            counts[t][col] += 1
    return GuardStats(counts)


def _pad(asa: Asa, num_states: int) -> Asa:
    if asa.num_states >= num_states:
        return asa
    return Asa(num_states, asa.accepting, asa.transitions)


def revise(incumbent: Asa, batch: Dataset, stats: GuardStats, cfg: IncrConfig,
           universe: GuardUniverse | None = None, seed: int | None = None) -> list[tuple[Asa, CostVector]]:
    """Search for up to ``k_best`` revisions of ``incumbent`` on ``batch``.

    Dropping an existing transition costs ``-w`` at the regularization level
    (so a fact with ``w = n - p > 0`` is rewarded for leaving); dropping an
    existing accepting fact costs 1. The search starts from the incumbent.
    """
    bcfg = replace(cfg.batch, timeout=cfg.per_batch_timeout,
                   seed=cfg.batch.seed if seed is None else seed)
    incumbent = _pad(incumbent, bcfg.structural.max_states)
    universe = universe if universe is not None else bcfg.universe(batch)
    data = CompiledDataset(batch, universe)
    trans, acc = data.encode(incumbent)
    removal = RemovalPenalties(
        {(t.src, data.guard_index(t.guard), t.dst): -stats.weight(t) for t in incumbent.transitions},
        {s: 1 for s in incumbent.accepting},
    )
    search = LocalSearch(batch, bcfg, universe, removal=removal, data=data, keep=cfg.k_best)
    report = search.run(starts=[(frozenset(trans), frozenset(acc))])
    return [(asa, cost) for cost, asa in report.candidates]


def learn_incremental(dataset: Dataset, cfg: IncrConfig, universe: GuardUniverse | None = None,
                      progress=None) -> LearnerReport:
    """Hill-climb over automata by revising the incumbent on shuffled mini-batches.

    A revision is adopted only when it strictly improves the cost on the full
    training set. ``progress``, if given, receives one tab-separated line per
    batch: iteration, batch, local error rate, revised, adopted, global cost.
    """
    if not len(dataset):
        raise ValueError("cannot learn from an empty dataset")
    if cfg.batch_size > len(dataset):
        raise ConfigError(f"batch_size {cfg.batch_size} exceeds the {len(dataset)} training examples")
    t0 = time.perf_counter()
    bcfg = cfg.batch
    sem = bcfg.semantics
    n = bcfg.structural.max_states
    universe = universe if universe is not None else bcfg.universe(dataset)
    full = CompiledDataset(dataset, universe)
    objective = Objective(full, bcfg.objective, sem)

    def global_cost(asa):
        return objective.asa_cost(asa)

    def key(cost):
        return cost.error if cfg.compare == "error" else cost

    incumbent = Asa(n)
    cost = global_cost(incumbent)
    accepted = full.evaluate(n, *full.encode(incumbent), sem).accepted
    stats = guard_stats(incumbent, dataset, sem)
    history = [cost]
    lines = []
    revisions = 0
    for it in range(cfg.iterations):
        order = list(range(len(dataset)))
        random.Random(cfg.shuffle_seed + it).shuffle(order)
        batches = [order[i:i + cfg.batch_size] for i in range(0, len(order), cfg.batch_size)]
        for b, idx in enumerate(batches):
            wrong = sum(((accepted >> i) & 1) != dataset.examples[i].positive for i in idx)
            rate = wrong / len(idx)
            revised = adopted = False
            if rate > cfg.error_threshold:
                revised = True
                revisions += 1
                batch = dataset.subset(idx)
                seed = bcfg.seed + 7919 * it + b
                candidates = revise(incumbent, batch, stats, cfg, universe, seed=seed)
                scored = sorted(((global_cost(a), a) for a, _ in candidates),
                                key=lambda ca: (key(ca[0]), ca[0], len(ca[1].transitions)))
                if scored and key(scored[0][0]) < key(cost):
                    new_cost, new_asa = scored[0]
                    assert key(new_cost) < key(cost)
                    incumbent, cost = new_asa, new_cost
                    accepted = full.evaluate(n, *full.encode(incumbent), sem).accepted
                    stats = guard_stats(incumbent, dataset, sem)
                    history.append(cost)
                    adopted = True
            line = f"{it}\t{b}\t{rate:.4f}\t{int(revised)}\t{int(adopted)}\t{cost.error},{cost.reg}"
            lines.append(line)
            log.debug(line)
            if progress is not None:
                progress(line)
    return LearnerReport(incumbent, cost, time.perf_counter() - t0, iterations=revisions,
                         exhaustive=False, evaluations=objective.evaluations, history=history,
                         candidates=[(cost, incumbent)], log=lines)
