"""Synthetic datasets labeled by a known ("planted") automaton."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .automaton import Asa, Semantics, Transition, run
from .core import AlphabetSpec, AttributeSet, Dataset, Label, LabeledExample, Mvs
from .guards import at_least, lt


class PlantedGenerationError(RuntimeError):
    pass


def default_planted_asa() -> Asa:
    """q0 loops while x1 >= b and moves to the accepting q1 once x2 < x3."""
    return Asa(2, frozenset({1}), frozenset({
        Transition(0, at_least("x1", "b"), 0),
        Transition(0, lt("x2", "x3"), 1),
    }))


@dataclass(frozen=True)
class PlantedModelSpec:
    asa: Asa = field(default_factory=default_planted_asa)
    attributes: AttributeSet = AttributeSet(("x1", "x2", "x3"))
    alphabet: AlphabetSpec = AlphabetSpec.letters(4)
    semantics: Semantics = Semantics("strict_contiguity", "earliest")
    length: int = 10
    n_pos: int = 100
    n_neg: int = 100
    noise: float = 0.0  # label flip probability
    seed: int = 0
    symbol_weights: tuple | None = None  # sampling bias over the alphabet; uniform if None
    max_draws: int | None = None  # default: 200 * (n_pos + n_neg)

    def __post_init__(self):
        if not 0.0 <= self.noise <= 1.0:
            raise ValueError("noise must lie in [0, 1]")
        if self.length < 1:
            raise ValueError("length must be >= 1")


def generate_planted(spec: PlantedModelSpec) -> tuple[Dataset, Asa]:
    """Sample sequences, label them by running the planted automaton, then flip labels with
    probability ``spec.noise``. Returns the dataset and the planted automaton."""
    rng = random.Random(spec.seed)
    symbols = list(spec.alphabet.symbols)
    want = {Label.POSITIVE: spec.n_pos, Label.NEGATIVE: spec.n_neg}
    got = {Label.POSITIVE: [], Label.NEGATIVE: []}
    max_draws = spec.max_draws or 200 * max(1, spec.n_pos + spec.n_neg)
    draws = 0
    while any(len(got[k]) < want[k] for k in want):
        if draws >= max_draws:
            rate = len(got[Label.POSITIVE]) / max(1, len(got[Label.POSITIVE]) + len(got[Label.NEGATIVE]))
            raise PlantedGenerationError(
                f"gave up after {draws} draws: got {len(got[Label.POSITIVE])}/{spec.n_pos} positives and "
                f"{len(got[Label.NEGATIVE])}/{spec.n_neg} negatives; the planted automaton accepts "
                f"roughly {rate:.1%} of sampled sequences")
        draws += 1
        values = {a: tuple(rng.choices(symbols, weights=spec.symbol_weights, k=spec.length))
                  for a in spec.attributes}
        mvs = Mvs(f"s{draws:06d}", values)
        label = Label.POSITIVE if run(spec.asa, mvs, spec.semantics, spec.alphabet).accepted else Label.NEGATIVE
        if len(got[label]) < want[label]:
            got[label].append(mvs)

    examples = []
    for label in (Label.POSITIVE, Label.NEGATIVE):
        for mvs in got[label]:
            if rng.random() < spec.noise:
                label_out = Label.NEGATIVE if label is Label.POSITIVE else Label.POSITIVE
            else:
                label_out = label
            examples.append(LabeledExample(mvs, label_out))
    rng.shuffle(examples)
    return Dataset(tuple(examples), spec.alphabet, spec.attributes), spec.asa
