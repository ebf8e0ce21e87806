import sys
import random

import pytest

from asal.automaton import Acceptance, Policy, Semantics
from asal.core import AlphabetSpec, AttributeSet, Dataset, Label, LabeledExample, Mvs
from asal.objective import EarlinessMode, ObjectiveConfig, StructuralConfig
from asal.search import BatchConfig
from asal.toy import early_asa, necrosis_asa, single_state_asa, toy_dataset


@pytest.fixture
def toy():
    return toy_dataset()


@pytest.fixture
def necrosis():
    return necrosis_asa()


@pytest.fixture
def two_state():
    return early_asa()


@pytest.fixture
def one_state():
    return single_state_asa()


def tiny_instance(seed: int, restarts: int = 100, timeout: float = 60.0):
    """Random instance small enough for exhaustive enumeration."""
    rng = random.Random(seed)
    n_attr = rng.choice([1, 2])
    alphabet = AlphabetSpec.letters(rng.choice([2, 3, 4]))
    attrs = [f"x{i}" for i in range(n_attr)]
    n_ex, length = rng.randint(2, 8), rng.randint(2, 8)
    examples = []
    for i in range(n_ex):
        m = Mvs(f"s{i}", {a: tuple(rng.choice(alphabet.symbols) for _ in range(length)) for a in attrs})
        examples.append(LabeledExample(m, Label.POSITIVE if i % 2 == 0 else Label.NEGATIVE))
    ds = Dataset(tuple(examples), alphabet, AttributeSet(tuple(attrs)))
    policy = rng.choice(list(Policy))
    acceptance = rng.choice(list(Acceptance))
    earliness = acceptance is not Acceptance.END_OF_SEQUENCE and rng.random() < 0.7
    mode = rng.choice(list(EarlinessMode))
    structural = StructuralConfig(rng.choice([1, 2]),
                                  acceptance is Acceptance.EARLIEST_ABSORBING or rng.random() < 0.5,
                                  rng.random() < 0.5, 2)
    cfg = BatchConfig(structural, ObjectiveConfig(earliness=earliness, earliness_mode=mode),
                      Semantics(policy, acceptance), timeout=timeout, seed=seed, restarts=restarts)
    return ds, cfg


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
