"""Batch automaton learning: exhaustive enumeration and anytime local search."""
from __future__ import annotations

import bisect
import itertools
import math
import random
import time
from dataclasses import dataclass, field

from .automaton import Asa, Semantics, Transition
from .compiled import CompiledDataset
from .core import Dataset
from .guards import GuardUniverse, SYMBOLIC_KINDS, ground_universe, normalize_kinds
from .objective import (ConfigError, CostVector, Objective, ObjectiveConfig, RemovalPenalties,
                        StructuralConfig)


@dataclass(frozen=True)
class BatchConfig:
    structural: StructuralConfig = StructuralConfig()
    objective: ObjectiveConfig = ObjectiveConfig()
    semantics: Semantics = Semantics()
    kinds: frozenset = SYMBOLIC_KINDS
    full_alphabet: bool = False  # ground over the whole alphabet, not just observed symbols
    timeout: float = 60.0
    seed: int = 0
    restarts: int = 100
    max_sideways: int = 10
    max_moves: int | None = None  # cap on neighbours evaluated per step

    def __post_init__(self):
        object.__setattr__(self, "kinds", normalize_kinds(self.kinds))
        if self.timeout <= 0:
            raise ConfigError("timeout must be positive")
        if self.restarts < 1:
            raise ConfigError("restarts must be >= 1")
        if self.structural.accepting_absorbing is False and self.semantics.retains_accepting:
            raise ConfigError("earliest_absorbing acceptance requires accepting_absorbing")

    def universe(self, dataset: Dataset) -> GuardUniverse:
        alphabet = dataset.alphabet if self.full_alphabet else dataset.observed_symbols()
        return ground_universe(dataset.attributes, alphabet, self.kinds)


@dataclass
class LearnerReport:
    asa: Asa
    cost: CostVector
    wall_time: float
    iterations: int
    exhaustive: bool
    timed_out: bool = False
    evaluations: int = 0
    history: list = field(default_factory=list)  # incumbent costs, in adoption order
    candidates: list = field(default_factory=list)  # (cost, Asa), best first
    log: list = field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.exhaustive and not self.timed_out


class EnumerationTooLarge(ValueError):
    def __init__(self, estimate: int, cap: int):
        self.estimate = estimate
        super().__init__(f"enumeration would visit ~{estimate:.3g} candidates, above the cap of {cap:.3g}")


def _decode(data: CompiledDataset, num_states: int, trans, acc) -> Asa:
    return Asa(num_states, frozenset(acc),
               frozenset(Transition(s, data.guards[g], d) for s, g, d in trans))


def _render_key(data: CompiledDataset, trans, acc) -> tuple:
    facts = sorted(f"transition(q{s},{data.guards[g]},q{d})." for s, g, d in trans)
    facts += [f"accepting(q{s})." for s in sorted(acc)]
    return tuple(facts)


def _accepting_sets(st: StructuralConfig, num_states: int):
    states = [s for s in range(num_states) if not (st.start_not_accepting and s == 0)]
    for k in range(len(states) + 1):
        for combo in itertools.combinations(states, k):
            yield frozenset(combo)


def _allowed(fact, acc, st: StructuralConfig) -> bool:
    s, _, d = fact
    return not (st.accepting_absorbing and s in acc and d != s)


def enumerate_optimal(dataset: Dataset, cfg: BatchConfig, max_transitions: int = 2,
                      cap: int = 10_000_000, universe: GuardUniverse | None = None) -> LearnerReport:
    """Exhaustively find a cost-minimal automaton with at most ``max_transitions`` facts.

    Ties are broken by fewer transitions, then by the sorted rendered facts.
    Meant as a ground-truth oracle on tiny instances.
    """
    t0 = time.perf_counter()
    st = cfg.structural
    if st.max_transitions is not None:
        max_transitions = min(max_transitions, st.max_transitions)
    n = st.max_states
    universe = universe if universe is not None else cfg.universe(dataset)
    data = CompiledDataset(dataset, universe)
    objective = Objective(data, cfg.objective, cfg.semantics)
    facts = [(s, g, d) for s in range(n) for g in range(len(universe)) for d in range(n)]

    plans = []
    estimate = 0
    for acc in _accepting_sets(st, n):
        allowed = [f for f in facts if _allowed(f, acc, st)]
        plans.append((acc, allowed))
        estimate += sum(math.comb(len(allowed), k) for k in range(max_transitions + 1))
    if estimate > cap:
        raise EnumerationTooLarge(estimate, cap)

    best_key = None
    best = None
    for acc, allowed in plans:
        for k in range(max_transitions + 1):
            for combo in itertools.combinations(allowed, k):
                cost = objective(n, combo, acc)
                key = (cost, k)
                if best_key is None or key < best_key[:2] or (
                        key == best_key[:2] and _render_key(data, combo, acc) < best_key[2]):
                    best_key = (cost, k, _render_key(data, combo, acc))
                    best = (combo, acc)
    asa = _decode(data, n, *best)
    return LearnerReport(asa, best_key[0], time.perf_counter() - t0, iterations=estimate,
                         exhaustive=True, evaluations=objective.evaluations,
                         history=[best_key[0]], candidates=[(best_key[0], asa)])


class _KBest:
    """The ``k`` lowest-cost distinct candidates seen so far.

    On equal cost the ``prefer``-red candidate (a revision's starting point)
    ranks first, so a revision never displaces the incumbent on a tie.
    """

    def __init__(self, k: int, prefer=None):
        self.k = k
        self.prefer = prefer
        self.items: list = []  # sorted (cost, not preferred, ntrans, trans, acc)
        self.seen: set = set()

    def offer(self, cost, trans, acc):
        if self.k <= 0:
            return
        ident = (tuple(sorted(trans)), tuple(sorted(acc)))
        item = (cost, ident != self.prefer, len(trans)) + ident
        if len(self.items) >= self.k and item >= self.items[-1]:
            return
        if ident in self.seen:
            return
        bisect.insort(self.items, item)
        self.seen.add(ident)
        if len(self.items) > self.k:
            dropped = self.items.pop()
            self.seen.discard(dropped[3:])


class _Timeout(Exception):
    pass


class LocalSearch:
    """Seeded restarts of best-improvement hill climbing over automaton edits.

    Moves: add a transition, remove one, swap a transition's guard, redirect
    its target, toggle an accepting state, and add a transition into a state
    made accepting in the same move. Sideways moves to unvisited candidates
    of equal cost are allowed up to ``max_sideways`` in a row. Restarts
    alternate between random candidates and random kicks from the incumbent.
    """

    def __init__(self, dataset: Dataset, cfg: BatchConfig, universe: GuardUniverse | None = None,
                 removal=None, data: CompiledDataset | None = None, keep: int = 1):
        self.cfg = cfg
        self.st = cfg.structural
        self.n = cfg.structural.max_states
        self.universe = universe if universe is not None else cfg.universe(dataset)
        self.data = data if data is not None else CompiledDataset(dataset, self.universe)
        self.guard_ids = [self.data.guard_index(g) for g in self.universe]
        self.objective = Objective(self.data, cfg.objective, cfg.semantics, removal)
        self.rng = random.Random(cfg.seed)
        self.kbest = _KBest(keep)
        self.deadline = None
        self.iterations = 0

    # -- candidate validity -------------------------------------------------
    def _valid(self, trans, acc) -> bool:
        st = self.st
        if st.max_transitions is not None and len(trans) > st.max_transitions:
            return False
        if st.start_not_accepting and 0 in acc:
            return False
        if st.accepting_absorbing:
            return all(s == d or s not in acc for s, _, d in trans)
        return True

    def _repair(self, trans, acc):
        """Drop transitions that leave accepting states when those must be absorbing."""
        if self.st.accepting_absorbing:
            trans = frozenset(f for f in trans if f[0] == f[2] or f[0] not in acc)
        return trans, acc

    # -- neighbourhood ------------------------------------------------------
    def neighbours(self, trans: frozenset, acc: frozenset):
        n, guards = self.n, self.guard_ids
        cap = self.st.max_transitions
        room = cap is None or len(trans) < cap
        ordered = sorted(trans)
        for f in ordered:
            yield trans - {f}, acc
        for s in range(n):
            if not (s == 0 and self.st.start_not_accepting):
                yield self._repair(trans, acc ^ {s})
        for f in ordered:
            s, g, d = f
            rest = trans - {f}
            for d2 in range(n):
                if d2 != d:
                    yield rest | {(s, g, d2)}, acc
            for g2 in guards:
                if g2 != g:
                    yield rest | {(s, g2, d)}, acc
        if room:
            for s in range(n):
                for d in range(n):
                    for g in guards:
                        f = (s, g, d)
                        if f not in trans:
                            yield trans | {f}, acc
                            if d not in acc and not (d == 0 and self.st.start_not_accepting) and d != s:
                                yield self._repair(trans | {f}, acc | {d})

    def random_candidate(self):
        st, n, rng = self.st, self.n, self.rng
        states = [s for s in range(n) if not (s == 0 and st.start_not_accepting)]
        acc = frozenset(s for s in states if rng.random() < 0.5)
        limit = n + 1 if st.max_transitions is None else min(st.max_transitions, n + 1)
        trans = set()
        for _ in range(rng.randint(1, max(1, limit)) if self.guard_ids else 0):
            trans.add((rng.randrange(n), rng.choice(self.guard_ids), rng.randrange(n)))
        trans, acc = self._repair(frozenset(trans), acc)
        if st.max_transitions is not None:
            trans = frozenset(sorted(trans)[: st.max_transitions])
        return trans, acc

    def perturb(self, trans, acc, strength: int = 2):
        """Apply ``strength`` random valid moves (an iterated-local-search kick)."""
        for _ in range(strength):
            moves = [m for m in self.neighbours(trans, acc) if self._valid(*m)]
            if not moves:
                break
            trans, acc = moves[self.rng.randrange(len(moves))]
        return trans, acc

    def initial_candidates(self):
        st, n = self.st, self.n
        yield frozenset(), frozenset()
        sink = n - 1 if (n > 1 or not st.start_not_accepting) else None
        if sink is not None:
            yield frozenset(), frozenset({sink})

    # -- search -------------------------------------------------------------
    def _eval(self, trans, acc):
        if self.deadline is not None and self.objective.evaluations % 32 == 0 \
                and time.perf_counter() > self.deadline:
            raise _Timeout
        cost = self.objective(self.n, trans, acc)
        self.kbest.offer(cost, trans, acc)
        return cost

    def _better(self, cost, trans, acc):
        inc = self.best
        if inc is None:
            return True
        key = (cost, len(trans))
        inc_key = (inc[0], len(inc[1]))
        if key != inc_key:
            return key < inc_key
        return _render_key(self.data, trans, acc) < _render_key(self.data, inc[1], inc[2])

    def _offer_incumbent(self, cost, trans, acc):
        if self._better(cost, trans, acc):
            self.best = (cost, trans, acc)
            self.history.append(cost)

    def climb(self, trans, acc):
        cost = self._eval(trans, acc)
        self._offer_incumbent(cost, trans, acc)
        visited = {(trans, acc)}
        sideways = 0
        max_moves = self.cfg.max_moves
        while True:
            self.iterations += 1
            best_cost, best_moves = None, []
            for i, (t2, a2) in enumerate(self.neighbours(trans, acc)):
                if max_moves is not None and i >= max_moves:
                    break
                if not self._valid(t2, a2):
                    continue
                c = self._eval(t2, a2)
                if best_cost is None or c < best_cost:
                    best_cost, best_moves = c, [(t2, a2)]
                elif c == best_cost:
                    best_moves.append((t2, a2))
            if best_cost is None:
                break
            if best_cost < cost:
                sideways = 0
            elif best_cost == cost and sideways < self.cfg.max_sideways:
                best_moves = [m for m in best_moves if m not in visited]
                if not best_moves:
                    break
                sideways += 1
            else:
                break
            trans, acc = best_moves[self.rng.randrange(len(best_moves))]
            cost = best_cost
            visited.add((trans, acc))
            self._offer_incumbent(cost, trans, acc)
        return cost, trans, acc

    def run(self, starts=None) -> LearnerReport:
        t0 = time.perf_counter()
        self.deadline = t0 + self.cfg.timeout
        self.best = None
        self.history = []
        timed_out = False
        if starts is not None:
            starts = list(starts)
            self.kbest.prefer = (tuple(sorted(starts[0][0])), tuple(sorted(starts[0][1])))
        else:
            starts = list(self.initial_candidates())
        try:
            for r in range(max(self.cfg.restarts, len(starts))):
                if r < len(starts):
                    trans, acc = starts[r]
                elif r % 2:
                    _, trans, acc = self.best
                    trans, acc = self.perturb(trans, acc, 2 + self.rng.randrange(2))
                else:
                    trans, acc = self.random_candidate()
                if not self._valid(trans, acc):
                    trans, acc = self._repair(trans, acc)
                self.climb(trans, acc)
        except _Timeout:
            timed_out = True
        if self.best is None:  # timed out before the first evaluation finished
            trans, acc = starts[0]
            self.best = (self.objective(self.n, trans, acc), trans, acc)
            self.history.append(self.best[0])
        cost, trans, acc = self.best
        asa = _decode(self.data, self.n, trans, acc)
        candidates = [(c, _decode(self.data, self.n, t, a)) for c, _, _, t, a in self.kbest.items]
        return LearnerReport(asa, cost, time.perf_counter() - t0, self.iterations, exhaustive=False,
                             timed_out=timed_out, evaluations=self.objective.evaluations,
                             history=list(self.history), candidates=candidates)


def local_search(dataset: Dataset, cfg: BatchConfig, universe: GuardUniverse | None = None) -> LearnerReport:
    if not len(dataset):
        raise ValueError("cannot learn from an empty dataset")
    return LocalSearch(dataset, cfg, universe).run()
