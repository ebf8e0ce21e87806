"""The two-example cell-population dataset and hand-written automata for it.

Three SAX-discretized signals (alive, necrotic and apoptotic cell counts) over
ten time steps; ``id1`` is a promising drug response, ``id2`` is not.
"""
from __future__ import annotations

from .automaton import Asa, Transition
from .core import AlphabetSpec, AttributeSet, Dataset, Label, LabeledExample, Mvs
from .guards import at_least, lt, neg

ATTRIBUTES = AttributeSet(("alive", "necrotic", "apoptotic"))
ALPHABET = AlphabetSpec.letters(10)


def toy_dataset() -> Dataset:
    id1 = Mvs.from_strings("id1", alive="eeeedcbbbb", necrotic="aabbbcccde", apoptotic="bbbcdghhhh")
    id2 = Mvs.from_strings("id2", alive="eecdbbbbbb", necrotic="aabbbbcccc", apoptotic="bbbcfghhhh")
    return Dataset(
        (LabeledExample(id1, Label.POSITIVE), LabeledExample(id2, Label.NEGATIVE)),
        ALPHABET,
        ATTRIBUTES,
    )


def necrosis_asa() -> Asa:
    """Loops while alive != b, moves to q1 once alive < necrotic, then needs necrotic >= c."""
    return Asa(
        2,
        frozenset({1}),
        frozenset({
            Transition(0, neg("alive", "b"), 0),
            Transition(0, lt("alive", "necrotic"), 1),
            Transition(1, at_least("necrotic", "c"), 1),
        }),
    )


def early_asa() -> Asa:
    """Two states, two transitions; accepts id1 after its fifth observation."""
    return Asa(
        2,
        frozenset({1}),
        frozenset({
            Transition(0, at_least("alive", "e"), 0),
            Transition(0, at_least("apoptotic", "d"), 1),
        }),
    )


def single_state_asa() -> Asa:
    """Accepting start state that dies as soon as apoptotic == f."""
    return Asa(1, frozenset({0}), frozenset({Transition(0, neg("apoptotic", "f"), 0)}))
