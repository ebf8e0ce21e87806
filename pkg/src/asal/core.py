"""Attributes, symbol alphabets, multivariate symbolic sequences and datasets."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence


class Label(str, enum.Enum):
    POSITIVE = "pos"
    NEGATIVE = "neg"

    @classmethod
    def parse(cls, value) -> "Label":
        if isinstance(value, Label):
            return value
        if isinstance(value, bool) or value in (0, 1):
            return cls.POSITIVE if value else cls.NEGATIVE
        text = str(value).strip().lower()
        if text in ("pos", "positive", "1", "true"):
            return cls.POSITIVE
        if text in ("neg", "negative", "0", "false"):
            return cls.NEGATIVE
        raise ValueError(f"unknown label {value!r}")


@dataclass(frozen=True)
class AlphabetSpec:
    """Ordered symbol alphabet; position in ``symbols`` is the symbol's rank."""

    symbols: tuple[str, ...]
    _rank: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if not self.symbols:
            raise ValueError("alphabet must contain at least one symbol")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValueError(f"duplicate symbols in alphabet {self.symbols}")
        object.__setattr__(self, "_rank", {s: i for i, s in enumerate(self.symbols)})

    @classmethod
    def letters(cls, size: int) -> "AlphabetSpec":
        if not 1 <= size <= 26:
            raise ValueError("letter alphabets hold 1..26 symbols")
        return cls(tuple(chr(ord("a") + i) for i in range(size)))

    def rank(self, symbol: str) -> int:
        return self._rank[symbol]

    def __contains__(self, symbol) -> bool:
        return symbol in self._rank

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def subset(self, symbols: Iterable[str]) -> "AlphabetSpec":
        """Restriction to ``symbols``, keeping this alphabet's order."""
        keep = set(symbols)
        return AlphabetSpec(tuple(s for s in self.symbols if s in keep))


@dataclass(frozen=True)
class AttributeSet:
    names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        if not self.names:
            raise ValueError("attribute set must be nonempty")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate attribute names {self.names}")

    def __contains__(self, name) -> bool:
        return name in self.names

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self):
        return iter(self.names)


@dataclass(frozen=True)
class Mvs:
    """A multivariate symbolic sequence.

    ``values`` maps each attribute to its symbol sequence; position ``t - 1``
    holds the observation at time ``t``. A ``None`` entry marks a missing cell,
    which :func:`validate_dataset` reports.
    """

    id: str
    values: Mapping[str, tuple]

    def __post_init__(self):
        object.__setattr__(self, "values", {a: tuple(v) for a, v in self.values.items()})

    @classmethod
    def from_strings(cls, id: str, **rows: str) -> "Mvs":
        """Build from one string per attribute, one character per time step."""
        return cls(id, {a: tuple(s) for a, s in rows.items()})

    @property
    def attributes(self) -> tuple[str, ...]:
        return tuple(self.values)

    @property
    def length(self) -> int:
        return max((len(v) for v in self.values.values()), default=0)

    def __len__(self) -> int:
        return self.length


def coordinate(mvs: Mvs, t: int) -> dict[str, str]:
    """Attribute-to-symbol map observed at time ``t`` (1-based)."""
    if not 1 <= t <= mvs.length:
        raise IndexError(f"time {t} outside 1..{mvs.length} for sequence {mvs.id!r}")
    return {a: seq[t - 1] for a, seq in mvs.values.items()}


@dataclass(frozen=True)
class LabeledExample:
    mvs: Mvs
    label: Label

    def __post_init__(self):
        object.__setattr__(self, "label", Label.parse(self.label))

    @property
    def id(self) -> str:
        return self.mvs.id

    @property
    def positive(self) -> bool:
        return self.label is Label.POSITIVE


@dataclass(frozen=True)
class Dataset:
    examples: tuple[LabeledExample, ...]
    alphabet: AlphabetSpec
    attributes: AttributeSet

    def __post_init__(self):
        object.__setattr__(self, "examples", tuple(self.examples))

    def __len__(self) -> int:
        return len(self.examples)

    def __iter__(self):
        return iter(self.examples)

    @property
    def positives(self) -> list[LabeledExample]:
        return [e for e in self.examples if e.positive]

    @property
    def negatives(self) -> list[LabeledExample]:
        return [e for e in self.examples if not e.positive]

    def subset(self, indices: Sequence[int]) -> "Dataset":
        return Dataset(tuple(self.examples[i] for i in indices), self.alphabet, self.attributes)

    def observed_symbols(self) -> AlphabetSpec:
        """Symbols occurring anywhere in the data, in alphabet order."""
        seen = set()
        for ex in self.examples:
            for seq in ex.mvs.values.values():
                seen.update(seq)
        return self.alphabet.subset(seen)


class ConfigError(ValueError):
    """Invalid settings (as opposed to invalid data)."""


class DatasetError(ValueError):
    """Raised when a dataset fails validation and cannot be used."""

    def __init__(self, violations: list[str]):
        self.violations = violations
        shown = "; ".join(violations[:5])
        more = f" (+{len(violations) - 5} more)" if len(violations) > 5 else ""
        super().__init__(f"invalid dataset: {shown}{more}")


def validate_dataset(d: Dataset) -> list[str]:
    violations = []
    seen_ids = set()
    for ex in d.examples:
        mvs = ex.mvs
        if mvs.id in seen_ids:
            violations.append(f"{mvs.id}: duplicate id")
        seen_ids.add(mvs.id)
        for attr in mvs.attributes:
            if attr not in d.attributes:
                violations.append(f"{mvs.id}: unknown attribute {attr!r}")
        n = mvs.length
        if n == 0:
            violations.append(f"{mvs.id}: empty sequence")
            continue
        for attr in d.attributes:
            seq = mvs.values.get(attr)
            if seq is None:
                violations.append(f"{mvs.id}: incomplete coordinate, attribute {attr!r} missing")
                continue
            if len(seq) != n:
                violations.append(
                    f"{mvs.id}: ragged sequence, attribute {attr!r} has length {len(seq)} != {n}"
                )
            for t, sym in enumerate(seq, start=1):
                if sym is None:
                    violations.append(f"{mvs.id}: incomplete coordinate ({attr}, t={t})")
                elif sym not in d.alphabet:
                    violations.append(f"{mvs.id}: symbol {sym!r} at ({attr}, t={t}) not in alphabet")
    return violations


def check_dataset(d: Dataset) -> Dataset:
    violations = validate_dataset(d)
    if violations:
        raise DatasetError(violations)
    return d


def make_dataset(examples: Iterable[LabeledExample], alphabet: AlphabetSpec | None = None,
                 attributes: AttributeSet | Sequence[str] | None = None) -> Dataset:
    """Build a dataset, inferring alphabet and attributes from the data when omitted."""
    examples = tuple(examples)
    if attributes is None:
        names: list[str] = []
        for ex in examples:
            for a in ex.mvs.attributes:
                if a not in names:
                    names.append(a)
        attributes = AttributeSet(tuple(names))
    elif not isinstance(attributes, AttributeSet):
        attributes = AttributeSet(tuple(attributes))
    if alphabet is None:
        symbols = sorted({s for ex in examples for seq in ex.mvs.values.values() for s in seq
                          if s is not None})
        alphabet = AlphabetSpec(tuple(symbols))
    return Dataset(examples, alphabet, attributes)
