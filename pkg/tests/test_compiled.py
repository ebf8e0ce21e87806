import numpy as np
from hypothesis import given, settings, strategies as st

from asal.automaton import Acceptance, Asa, Policy, Semantics, run
from asal.compiled import CompiledDataset, _pack
from asal.core import AlphabetSpec, AttributeSet, Dataset, Label, LabeledExample, Mvs
from asal.guards import at_least, at_most, eq, lt, neg
from asal.objective import EarlinessMode, Objective, ObjectiveConfig, cost_vector

ALPHA = AlphabetSpec.letters(3)
ATTRS = ("x", "y")
guard_st = st.one_of(
    st.builds(eq, st.sampled_from(ATTRS), st.sampled_from(ALPHA.symbols)),
    st.builds(neg, st.sampled_from(ATTRS), st.sampled_from(ALPHA.symbols)),
    st.builds(at_least, st.sampled_from(ATTRS), st.sampled_from(ALPHA.symbols)),
    st.builds(at_most, st.sampled_from(ATTRS), st.sampled_from(ALPHA.symbols)),
    st.just(lt("x", "y")), st.just(lt("y", "x")),
)


@st.composite
def datasets(draw, ragged=True):
    n = draw(st.integers(1, 9))
    fixed = draw(st.integers(1, 7))
    examples = []
    for i in range(n):
        length = draw(st.integers(1, 7)) if ragged else fixed
        word = st.text(alphabet="abc", min_size=length, max_size=length)
        m = Mvs.from_strings(f"e{i}", x=draw(word), y=draw(word))
        examples.append(LabeledExample(m, draw(st.sampled_from(list(Label)))))
    return Dataset(tuple(examples), ALPHA, AttributeSet(ATTRS))


@st.composite
def automata(draw):
    n = draw(st.integers(1, 3))
    trans = draw(st.lists(st.tuples(st.integers(0, n - 1), guard_st, st.integers(0, n - 1)), max_size=6))
    acc = draw(st.sets(st.integers(0, n - 1)))
    return Asa(n, acc, trans)


def test_pack_bit_order():
    assert _pack(np.array([True, False, True])) == 0b101
    assert _pack(np.zeros(70, dtype=bool)) == 0
    bits = np.zeros(70, dtype=bool)
    bits[69] = True
    assert _pack(bits) == 1 << 69


@settings(max_examples=400, deadline=None)
@given(datasets(), automata(), st.sampled_from(list(Policy)), st.sampled_from(list(Acceptance)))
def test_compiled_matches_reference_interpreter(ds, asa, policy, acceptance):
    sem = Semantics(policy, acceptance)
    data = CompiledDataset(ds)
    out = data.evaluate(asa.num_states, *data.encode(asa), sem)
    results = [run(asa, ex.mvs, sem, ALPHA) for ex in ds]
    assert [bool((out.accepted >> i) & 1) for i in range(len(ds))] == [r.accepted for r in results]
    assert list(data.predict(asa, sem)) == [r.accepted for r in results]
    if sem.earliest:
        assert out.earliness_all == sum(sum(r.accepting_times(asa.accepting)) for r in results)
        assert out.earliness_first == sum(r.first_accept_time for r in results if r.accepted)


@settings(max_examples=300, deadline=None)
@given(datasets(), automata(), st.sampled_from(list(Policy)), st.sampled_from(list(Acceptance)),
       st.sampled_from(list(EarlinessMode)), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2))
def test_fast_objective_matches_reference_cost(ds, asa, policy, acceptance, mode, w_fp, w_fn, penalty):
    sem = Semantics(policy, acceptance)
    cfg = ObjectiveConfig(w_fp=w_fp, w_fn=w_fn, transition_penalty=penalty, earliness=sem.earliest,
                          earliness_mode=mode)
    fast = Objective(CompiledDataset(ds), cfg, sem).asa_cost(asa)
    assert fast == cost_vector(asa, ds, sem, cfg)


def test_guards_outside_universe_are_added_on_demand(toy, necrosis):
    data = CompiledDataset(toy, universe=None)
    sem = Semantics()
    assert list(data.predict(necrosis, sem)) == [True, False]
    before = data.guard_index(neg("alive", "b"))
    assert data.guard_index(neg("alive", "b")) == before
