"""Answer set automata: the model, its fact representation and the interpreter.

Time convention: ``occupancy[t]`` is the set of states occupied *before*
consuming the observation at time ``t``; consuming it yields
``occupancy[t + 1]``. An automaton starts in ``q0`` at time 1, so a sequence of
length ``n`` has occupancies for times ``1 .. n + 1``.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple

from .core import AlphabetSpec, AttributeSet, Mvs, coordinate
from .guards import GroundGuard, GuardError, parse_guard, satisfies, validate_guard


class Policy(str, enum.Enum):
    STRICT_CONTIGUITY = "strict_contiguity"
    SKIP_TILL_ANY_MATCH = "skip_till_any_match"


class Acceptance(str, enum.Enum):
    # accepting state occupied after the last observation
    END_OF_SEQUENCE = "end_of_sequence"
    # accepting state occupied at any time; accepting states are kept once reached
    EARLIEST_ABSORBING = "earliest_absorbing"
    # accepting state occupied at any time; no retention (literal ASP interpreter)
    EARLIEST = "earliest"


@dataclass(frozen=True)
class Semantics:
    policy: Policy = Policy.STRICT_CONTIGUITY
    acceptance: Acceptance = Acceptance.END_OF_SEQUENCE

    def __post_init__(self):
        object.__setattr__(self, "policy", Policy(self.policy))
        object.__setattr__(self, "acceptance", Acceptance(self.acceptance))

    @property
    def earliest(self) -> bool:
        return self.acceptance is not Acceptance.END_OF_SEQUENCE

    @property
    def retains_accepting(self) -> bool:
        return self.acceptance is Acceptance.EARLIEST_ABSORBING


class Transition(NamedTuple):
    src: int
    guard: GroundGuard
    dst: int

    def __str__(self) -> str:
        return f"transition(q{self.src},{self.guard},q{self.dst})."


@dataclass(frozen=True)
class Asa:
    """An answer set automaton over states ``q0 .. q{num_states-1}``; ``q0`` is the start."""

    num_states: int
    accepting: frozenset = frozenset()
    transitions: frozenset = frozenset()

    def __post_init__(self):
        if self.num_states < 1:
            raise ValueError("an automaton needs at least one state")
        trans = frozenset(Transition(*t) for t in self.transitions)
        acc = frozenset(int(s) for s in self.accepting)
        for s in acc:
            if not 0 <= s < self.num_states:
                raise ValueError(f"accepting state q{s} outside q0..q{self.num_states - 1}")
        for t in trans:
            if not (0 <= t.src < self.num_states and 0 <= t.dst < self.num_states):
                raise ValueError(f"{t} has an endpoint outside q0..q{self.num_states - 1}")
        object.__setattr__(self, "transitions", trans)
        object.__setattr__(self, "accepting", acc)

    start = 0

    @property
    def states(self) -> range:
        return range(self.num_states)

    def outgoing(self, state: int) -> list[Transition]:
        return sorted((t for t in self.transitions if t.src == state), key=_transition_key)

    def used_states(self) -> set[int]:
        """``q0`` plus every state incident to at least one transition."""
        used = {0}
        for t in self.transitions:
            used.update((t.src, t.dst))
        return used

    def facts(self) -> list[str]:
        lines = [str(t) for t in sorted(self.transitions, key=_transition_key)]
        lines += [f"accepting(q{s})." for s in sorted(self.accepting)]
        return lines

    def __str__(self) -> str:
        return render_asa(self)


def _transition_key(t: Transition):
    return (t.src, t.dst, str(t.guard))


def step(asa: Asa, occupied: Iterable[int], coord: Mapping[str, str], sem: Semantics,
         alphabet: AlphabetSpec | None = None) -> frozenset:
    """One application of the transition function to every occupied state."""
    nxt = set()
    for q in occupied:
        targets = {t.dst for t in asa.transitions if t.src == q and satisfies(t.guard, coord, alphabet)}
        if not targets and sem.policy is Policy.SKIP_TILL_ANY_MATCH:
            targets = {q}
        if sem.retains_accepting and q in asa.accepting:
            targets.add(q)
        nxt |= targets
    return frozenset(nxt)


@dataclass(frozen=True)
class RunResult:
    accepted: bool
    first_accept_time: int | None
    dead_time: int | None
    occupancy: tuple  # occupancy[i] is the occupied set at time i + 1
    used_transitions: frozenset = field(default_factory=frozenset)

    def occupied_at(self, t: int) -> frozenset:
        return self.occupancy[t - 1]

    @property
    def used_guards(self) -> frozenset:
        return frozenset(t.guard for t in self.used_transitions)

    def accepting_times(self, accepting: Iterable[int]) -> list[int]:
        acc = set(accepting)
        return [i + 1 for i, occ in enumerate(self.occupancy) if occ & acc]


def run(asa: Asa, mvs: Mvs, sem: Semantics = Semantics(), alphabet: AlphabetSpec | None = None,
        witness: bool = False) -> RunResult:
    """Interpret ``asa`` on ``mvs``.

    ``used_transitions`` holds every transition fact lying on some accepting
    run; with ``witness=True`` only the facts of a single accepting run are
    kept (the first in state/fact order).
    """
    n = mvs.length
    occupancy = [frozenset({0})]
    fired = []  # per time t: list of (src, transition-or-None, dst) edges taken
    for t in range(1, n + 1):
        coord = coordinate(mvs, t)
        edges = []
        for q in sorted(occupancy[-1]):
            out = [tr for tr in asa.outgoing(q) if satisfies(tr.guard, coord, alphabet)]
            edges.extend((q, tr, tr.dst) for tr in out)
            if not out and sem.policy is Policy.SKIP_TILL_ANY_MATCH:
                edges.append((q, None, q))
            if sem.retains_accepting and q in asa.accepting:
                edges.append((q, None, q))
        fired.append(edges)
        occupancy.append(frozenset(dst for _, _, dst in edges))

    acc = asa.accepting
    hits = [i + 1 for i, occ in enumerate(occupancy) if occ & acc]
    first = hits[0] if hits else None
    dead = next((i + 1 for i, occ in enumerate(occupancy) if not occ), None)
    if sem.earliest:
        accepted = first is not None
    else:
        accepted = bool(occupancy[n] & acc)

    used = frozenset()
    if accepted:
        used = _accepting_path_facts(occupancy, fired, acc, sem, witness)
    return RunResult(accepted, first, dead, tuple(occupancy), used)


def _accepting_path_facts(occupancy, fired, acc, sem, witness):
    n = len(fired)
    # good[t]: states at time t from which an accepting occupancy is still reachable
    good = [set() for _ in range(n + 1)]
    good[n] = set(occupancy[n] & acc)
    for i in range(n - 1, -1, -1):
        g = {src for src, _, dst in fired[i] if dst in good[i + 1]}
        if sem.earliest:
            g |= occupancy[i] & acc
        good[i] = g

    def on_path(i, src, dst):
        if sem.earliest and src in acc:
            return False  # the run has already accepted
        return dst in good[i + 1]

    if not witness:
        return frozenset(tr for i, edges in enumerate(fired) for src, tr, dst in edges
                         if tr is not None and on_path(i, src, dst))

    used = set()
    state = 0
    for i, edges in enumerate(fired):
        if sem.earliest and state in acc:
            break
        for src, tr, dst in edges:
            if src == state and on_path(i, src, dst):
                if tr is not None:
                    used.add(tr)
                state = dst
                break
    return frozenset(used)


# ---------------------------------------------------------------------------
# Fact file format


class AsaSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


_STATE_RE = re.compile(r"^q(\d+)$")
_FACT_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*\((.*)\)\s*$", re.S)


def _parse_state(text: str, line: int, col: int) -> int:
    m = _STATE_RE.match(text.strip())
    if not m:
        raise AsaSyntaxError(f"malformed state {text.strip()!r}", line, col)
    return int(m.group(1))


def _split_top(args: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in args:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def _iter_facts(text: str):
    """Yield ``(fact_text, line, column)`` for each ``.``-terminated fact."""
    buf, start = [], None
    depth = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("%", 1)[0]
        for col, ch in enumerate(line, start=1):
            if start is None:
                if ch.isspace():
                    continue
                start = (lineno, col)
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            if ch == "." and depth == 0:
                yield "".join(buf), start[0], start[1]
                buf, start = [], None
            else:
                buf.append(ch)
        if start is not None:
            buf.append(" ")
    if start is not None and "".join(buf).strip():
        raise AsaSyntaxError("fact not terminated by '.'", *start)


def parse_asa(text: str, num_states: int | None = None, attributes: AttributeSet | None = None,
              alphabet: AlphabetSpec | None = None) -> Asa:
    """Parse ``transition(q,guard,q).`` / ``accepting(q).`` facts.

    When ``attributes``/``alphabet`` are given, guards are checked against them.
    """
    transitions, accepting = [], []
    max_state = 0
    for fact, line, col in _iter_facts(text):
        m = _FACT_RE.match(fact.strip())
        if not m:
            raise AsaSyntaxError(f"malformed fact {fact.strip()!r}", line, col)
        pred, body = m.groups()
        args = _split_top(body)
        if pred == "transition":
            if len(args) != 3:
                raise AsaSyntaxError(f"transition/3 expects 3 arguments, got {len(args)}", line, col)
            src = _parse_state(args[0], line, col)
            dst = _parse_state(args[2], line, col)
            try:
                guard = parse_guard(args[1])
            except GuardError as exc:
                raise AsaSyntaxError(str(exc), line, col) from None
            if attributes is not None and alphabet is not None:
                problems = validate_guard(guard, attributes, alphabet)
                if problems:
                    raise AsaSyntaxError(problems[0], line, col)
            transitions.append(Transition(src, guard, dst))
            max_state = max(max_state, src, dst)
        elif pred == "accepting":
            if len(args) != 1:
                raise AsaSyntaxError(f"accepting/1 expects 1 argument, got {len(args)}", line, col)
            s = _parse_state(args[0], line, col)
            accepting.append(s)
            max_state = max(max_state, s)
        else:
            raise AsaSyntaxError(f"unknown predicate {pred!r}", line, col)
    if num_states is None:
        num_states = max_state + 1
    elif max_state >= num_states:
        raise ValueError(f"state q{max_state} exceeds the declared {num_states} states")
    return Asa(num_states, frozenset(accepting), frozenset(transitions))


def render_asa(asa: Asa) -> str:
    return "\n".join(asa.facts()) + "\n"
