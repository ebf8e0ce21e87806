"""Transition guards: templates, grounding and satisfaction against one time point."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

from .core import AlphabetSpec, AttributeSet, ConfigError

# Canonical kind order; also the generation order of a guard universe.
KINDS = ("eq", "neg", "lt", "at_least", "at_most")
VALUE_KINDS = frozenset({"eq", "neg", "at_least", "at_most"})
PAIR_KINDS = frozenset({"lt"})
SYMBOLIC_KINDS = frozenset(KINDS)
CLASSIC_KINDS = frozenset({"eq"})


class GuardError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class GroundGuard:
    """A ground transition guard, e.g. ``lt(alive,necrotic)`` or ``neg(apoptotic,f)``.

    Value kinds take ``(attribute, symbol)``; ``lt`` takes two distinct attributes.
    """

    kind: str
    args: tuple[str, str]

    def __post_init__(self):
        if self.kind not in SYMBOLIC_KINDS:
            raise GuardError(f"unknown guard kind {self.kind!r}")
        if len(self.args) != 2:
            raise GuardError(f"{self.kind} takes 2 arguments, got {len(self.args)}")
        object.__setattr__(self, "args", tuple(self.args))
        if self.kind == "lt" and self.args[0] == self.args[1]:
            raise GuardError(f"lt needs two distinct attributes, got {self.args}")

    def __str__(self) -> str:
        return f"{self.kind}({self.args[0]},{self.args[1]})"

    @property
    def attributes(self) -> tuple[str, ...]:
        return self.args if self.kind == "lt" else self.args[:1]


def eq(attr: str, value: str) -> GroundGuard:
    return GroundGuard("eq", (attr, value))


def neg(attr: str, value: str) -> GroundGuard:
    return GroundGuard("neg", (attr, value))


def lt(attr1: str, attr2: str) -> GroundGuard:
    return GroundGuard("lt", (attr1, attr2))


def at_least(attr: str, value: str) -> GroundGuard:
    return GroundGuard("at_least", (attr, value))


def at_most(attr: str, value: str) -> GroundGuard:
    return GroundGuard("at_most", (attr, value))


_GUARD_RE = re.compile(r"^\s*([a-z][A-Za-z0-9_]*)\s*\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)\s*$")


def parse_guard(text: str) -> GroundGuard:
    head = re.match(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*\(", text)
    if head and head.group(1) not in SYMBOLIC_KINDS:
        raise GuardError(f"unknown guard kind {head.group(1)!r} in {text.strip()!r}")
    m = _GUARD_RE.match(text)
    if not m:
        raise GuardError(f"malformed guard {text.strip()!r}")
    kind, a, b = m.groups()
    return GroundGuard(kind, (a, b))


def validate_guard(g: GroundGuard, attrs: AttributeSet, alphabet: AlphabetSpec) -> list[str]:
    problems = [f"{g}: unknown attribute {a!r}" for a in g.attributes if a not in attrs]
    if g.kind in VALUE_KINDS and g.args[1] not in alphabet:
        problems.append(f"{g}: unknown symbol {g.args[1]!r}")
    return problems


def _rank(symbol: str, alphabet: AlphabetSpec | None):
    return symbol if alphabet is None else alphabet.rank(symbol)


def satisfies(g: GroundGuard, coord: Mapping[str, str], alphabet: AlphabetSpec | None = None) -> bool:
    """Whether the time point ``coord`` satisfies ``g``.

    Symbol comparisons follow ``alphabet`` order; without an alphabet the
    symbols' natural (lexicographic) order is used.
    """
    try:
        if g.kind == "lt":
            return _rank(coord[g.args[0]], alphabet) < _rank(coord[g.args[1]], alphabet)
        attr, value = g.args
        observed = coord[attr]
    except KeyError as exc:
        raise GuardError(f"{g}: attribute {exc.args[0]!r} absent from coordinate") from None
    if g.kind == "eq":
        return observed == value
    if g.kind == "neg":
        return observed != value
    if g.kind == "at_least":
        return _rank(observed, alphabet) >= _rank(value, alphabet)
    return _rank(observed, alphabet) <= _rank(value, alphabet)


@dataclass(frozen=True)
class GuardUniverse:
    kinds: frozenset
    guards: tuple[GroundGuard, ...]

    def __len__(self) -> int:
        return len(self.guards)

    def __iter__(self):
        return iter(self.guards)

    def index(self, g: GroundGuard) -> int:
        return self.guards.index(g)


def normalize_kinds(kinds: Iterable[str] | str) -> frozenset:
    if isinstance(kinds, str):
        if kinds == "symbolic":
            return SYMBOLIC_KINDS
        if kinds == "classic":
            return CLASSIC_KINDS
        kinds = [k for k in kinds.split(",") if k]
    kinds = frozenset(k.strip() for k in kinds)
    unknown = kinds - SYMBOLIC_KINDS
    if unknown:
        raise ConfigError(f"unknown guard kinds {sorted(unknown)}")
    return kinds


def ground_universe(attrs: AttributeSet, alphabet: AlphabetSpec, kinds) -> GuardUniverse:
    """Every well-typed ground guard over ``attrs`` and ``alphabet``.

    Order is by kind (see ``KINDS``), then attribute order, then symbol order.
    """
    kinds = normalize_kinds(kinds)
    if not kinds:
        raise ConfigError("at least one guard kind must be enabled")
    guards = []
    for kind in KINDS:
        if kind not in kinds:
            continue
        if kind == "lt":
            guards.extend(GroundGuard(kind, (a1, a2)) for a1 in attrs for a2 in attrs if a1 != a2)
        else:
            guards.extend(GroundGuard(kind, (a, v)) for a in attrs for v in alphabet)
    return GuardUniverse(kinds, tuple(guards))
