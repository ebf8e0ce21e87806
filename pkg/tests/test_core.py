import pytest

from asal.core import (AlphabetSpec, AttributeSet, Dataset, DatasetError, Label, LabeledExample, Mvs, check_dataset,
                       coordinate, make_dataset, validate_dataset)


def test_coordinate_first_and_last_step(toy):
    id1 = toy.examples[0].mvs
    assert coordinate(id1, 1) == {"alive": "e", "necrotic": "a", "apoptotic": "b"}
    assert coordinate(id1, 10) == {"alive": "b", "necrotic": "e", "apoptotic": "h"}


def test_coordinate_is_total(toy):
    for ex in toy:
        for t in range(1, ex.mvs.length + 1):
            assert set(coordinate(ex.mvs, t)) == set(toy.attributes)


@pytest.mark.parametrize("t", [0, 11, -1])
def test_coordinate_out_of_range(toy, t):
    with pytest.raises(IndexError):
        coordinate(toy.examples[0].mvs, t)


def test_toy_dataset_is_valid(toy):
    assert validate_dataset(toy) == []
    assert [ex.id for ex in toy.positives] == ["id1"]
    assert [ex.id for ex in toy.negatives] == ["id2"]


def _ds(*mvs, labels=None):
    labels = labels or [Label.POSITIVE] * len(mvs)
    return Dataset(tuple(LabeledExample(m, lab) for m, lab in zip(mvs, labels)), AlphabetSpec.letters(3),
                   AttributeSet(("x", "y")))


def test_incomplete_coordinate_reported():
    m = Mvs("s1", {"x": ("a", None, "b"), "y": ("a", "b", "c")})
    problems = validate_dataset(_ds(m))
    assert len(problems) == 1
    assert "incomplete coordinate" in problems[0] and "s1" in problems[0]


def test_duplicate_id_reported():
    m = Mvs.from_strings("s1", x="ab", y="ba")
    problems = validate_dataset(_ds(m, m))
    assert len(problems) == 1 and "duplicate id" in problems[0]


def test_ragged_and_unknown_symbol_reported():
    ragged = Mvs("r", {"x": ("a", "b"), "y": ("a",)})
    strange = Mvs.from_strings("z", x="az", y="ab")
    problems = validate_dataset(_ds(ragged, strange))
    assert any("ragged" in p and "r" in p for p in problems)
    assert any("'z'" in p or " z" in p for p in problems)


def test_check_dataset_raises():
    m = Mvs.from_strings("s1", x="ab", y="ba")
    with pytest.raises(DatasetError):
        check_dataset(_ds(m, m))


def test_alphabet_rank_and_subset():
    a = AlphabetSpec(("low", "mid", "high"))
    assert [a.rank(s) for s in a] == [0, 1, 2]
    assert a.subset({"high", "low"}).symbols == ("low", "high")
    with pytest.raises(ValueError):
        AlphabetSpec(("a", "a"))


def test_label_parse():
    assert Label.parse("pos") is Label.POSITIVE
    assert Label.parse(0) is Label.NEGATIVE
    with pytest.raises(ValueError):
        Label.parse("maybe")


def test_make_dataset_infers_alphabet_and_attributes():
    ds = make_dataset([LabeledExample(Mvs.from_strings("a", u="cb", v="ad"), Label.POSITIVE)])
    assert ds.alphabet.symbols == ("a", "b", "c", "d")
    assert tuple(ds.attributes) == ("u", "v")


def test_subset_and_observed_symbols(toy):
    sub = toy.subset([1])
    assert [ex.id for ex in sub] == ["id2"]
    assert set(toy.observed_symbols()) == set("abcdefgh")
