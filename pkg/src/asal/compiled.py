"""Bit-parallel evaluation of automata over a whole dataset.

Each guard's truth value at time ``t`` is packed into one Python int with one
bit per example, so a transition step over all examples is a handful of
integer ``&``/``|`` operations. This is the learners' hot path; the
per-example interpreter in :mod:`asal.automaton` is the reference it is
tested against.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .automaton import Asa, Policy, Semantics
from .core import Dataset
from .guards import GroundGuard, GuardUniverse


def _pack(bits: np.ndarray) -> int:
    """Bool vector -> int with bit ``i`` set iff ``bits[i]``."""
    if not bits.any():
        return 0
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


@dataclass
class Outcome:
    accepted: int  # bit mask over examples
    earliness_all: int  # sum over examples of every time step with an accepting state occupied
    earliness_first: int  # sum over accepted examples of the first such time step


class CompiledDataset:
    """A dataset encoded for fast repeated automaton evaluation."""

    def __init__(self, dataset: Dataset, universe: GuardUniverse | None = None):
        self.dataset = dataset
        self.size = len(dataset)
        self.lengths = np.array([ex.mvs.length for ex in dataset], dtype=int)
        self.max_length = int(self.lengths.max()) if self.size else 0
        self.uniform = bool(self.size == 0 or (self.lengths == self.max_length).all())
        attrs = list(dataset.attributes)
        self._attr_index = {a: i for i, a in enumerate(attrs)}
        # ranks[e, a, t]; -1 pads sequences shorter than max_length
        ranks = np.full((self.size, len(attrs), self.max_length), -1, dtype=np.int16)
        for e, ex in enumerate(dataset):
            for a, attr in enumerate(attrs):
                seq = ex.mvs.values[attr]
                ranks[e, a, : len(seq)] = [dataset.alphabet.rank(s) for s in seq]
        self._ranks = ranks
        self.all_mask = (1 << self.size) - 1
        self.pos_mask = _pack(np.array([ex.positive for ex in dataset], dtype=bool))
        self.neg_mask = self.all_mask & ~self.pos_mask
        # active[t]: examples still consuming input at 0-based step t
        self.active = [_pack(self.lengths > t) for t in range(self.max_length)]
        # alive_at[i]: examples having an occupancy at time i + 1
        self.alive_at = [_pack(self.lengths + 1 >= i + 1) for i in range(self.max_length + 1)]
        self.guards: list[GroundGuard] = []
        self._index: dict[GroundGuard, int] = {}
        self._columns: list[list[int]] = []  # _columns[g][t]
        for g in universe or ():
            self.guard_index(g)

    def guard_index(self, g: GroundGuard) -> int:
        idx = self._index.get(g)
        if idx is None:
            idx = len(self.guards)
            self.guards.append(g)
            self._index[g] = idx
            self._columns.append(self._column(g))
        return idx

    def _column(self, g: GroundGuard) -> list[int]:
        r = self._ranks
        if self.size == 0:
            return [0] * self.max_length
        if g.kind == "lt":
            x = r[:, self._attr_index[g.args[0]], :]
            y = r[:, self._attr_index[g.args[1]], :]
            truth = x < y
        else:
            x = r[:, self._attr_index[g.args[0]], :]
            v = self.dataset.alphabet.rank(g.args[1])
            truth = {"eq": x == v, "neg": x != v, "at_least": x >= v, "at_most": x <= v}[g.kind]
        truth &= r[:, 0, :] >= 0
        return [_pack(truth[:, t]) for t in range(self.max_length)]

    def column(self, g: GroundGuard) -> list[int]:
        return self._columns[self.guard_index(g)]

    def encode(self, asa: Asa) -> tuple:
        trans = tuple(sorted((t.src, self.guard_index(t.guard), t.dst) for t in asa.transitions))
        return trans, asa.accepting

    def evaluate(self, num_states: int, transitions, accepting, sem: Semantics) -> Outcome:
        """Run an automaton given as ``(src, guard_index, dst)`` triples on every example."""
        out = [[] for _ in range(num_states)]
        for src, g, dst in transitions:
            out[src].append((self._columns[g], dst))
        acc = [s for s in accepting]
        skip = sem.policy is Policy.SKIP_TILL_ANY_MATCH
        retain = sem.retains_accepting
        full = self.all_mask
        occ = [0] * num_states
        occ[0] = full

        def accepting_now(i):
            m = 0
            for s in acc:
                m |= occ[s]
            return m & self.alive_at[i]

        now = accepting_now(0)
        ever = now
        e_all = now.bit_count()
        e_first = e_all
        for t in range(self.max_length):
            new = [0] * num_states
            any_live = False
            for q in range(num_states):
                oq = occ[q]
                if not oq:
                    continue
                any_live = True
                enabled = 0
                for col, dst in out[q]:
                    s = col[t]
                    new[dst] |= oq & s
                    enabled |= s
                if skip:
                    new[q] |= oq & ~enabled
                if retain and q in accepting:
                    new[q] |= oq
            if not any_live:
                break
            if not self.uniform:
                act = self.active[t]
                new = [(n & act) | (o & ~act) for n, o in zip(new, occ)]
            occ = new
            now = accepting_now(t + 1)
            if now:
                e_all += (t + 2) * now.bit_count()
                fresh = now & ~ever
                if fresh:
                    e_first += (t + 2) * fresh.bit_count()
                    ever |= fresh
        if sem.earliest:
            accepted = ever
        else:
            accepted = 0
            for s in acc:
                accepted |= occ[s]
        return Outcome(accepted & full, e_all, e_first)

    def predict(self, asa: Asa, sem: Semantics) -> np.ndarray:
        trans, acc = self.encode(asa)
        mask = self.evaluate(asa.num_states, trans, acc, sem).accepted
        return np.array([(mask >> i) & 1 for i in range(self.size)], dtype=bool)
