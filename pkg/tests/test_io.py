import pytest

from asal.core import AlphabetSpec, DatasetError
from asal.io import (DataError, load_dataset, load_series, read_labels, save_dataset, write_long_csv, write_wide_csv)
from asal.sax import RawSeries


@pytest.fixture
def toy_files(tmp_path, toy):
    data, labels = tmp_path / "toy.csv", tmp_path / "labels.csv"
    save_dataset(toy, data, labels)
    return data, labels


def test_table1_long_csv(toy_files, toy):
    data, labels = toy_files
    assert len(data.read_text().splitlines()) == 1 + 60
    assert len(labels.read_text().splitlines()) == 1 + 2
    ds = load_dataset(data, labels, alphabet=AlphabetSpec.letters(10))
    assert len(ds) == 2 and len(ds.attributes) == 3
    assert all(ex.mvs.length == 10 for ex in ds)
    assert ds == toy


def test_wide_round_trip(tmp_path, toy):
    data, labels = tmp_path / "w.csv", tmp_path / "l.csv"
    save_dataset(toy, data, labels, format="wide_csv")
    assert data.read_text().splitlines()[0] == "seq_id,t,alive,necrotic,apoptotic"
    assert load_dataset(data, labels, "wide_csv", AlphabetSpec.letters(10)) == toy


def test_default_alphabet_is_sorted_observed(toy_files):
    ds = load_dataset(*toy_files)
    assert ds.alphabet.symbols == tuple("abcdefgh")


def test_empty_file(tmp_path):
    empty = tmp_path / "e.csv"
    empty.write_text("")
    with pytest.raises(DataError, match="no rows"):
        load_series(empty)


def test_non_contiguous_time_index(tmp_path):
    f = tmp_path / "gap.csv"
    f.write_text("seq_id,attribute,t,value\ns1,x,1,a\ns1,x,2,b\ns1,x,4,c\n")
    with pytest.raises(DataError) as info:
        load_series(f)
    msg = str(info.value)
    assert "non-contiguous time index" in msg and "row 4" in msg


@pytest.mark.parametrize("body, needle", [
    ("s1,x,1,\n", "missing value"),
    ("s1,x,one,a\n", "not an integer"),
    ("s1,x,1,a\ns1,x,1,b\n", "duplicate cell"),
    ("s1,x,1,a\ns1,y,1,a\ns1,y,2,b\n", "different lengths"),
    ("s1,x,1,a\ns2,y,1,b\n", "missing cells"),
])
def test_row_level_errors(tmp_path, body, needle):
    f = tmp_path / "bad.csv"
    f.write_text("seq_id,attribute,t,value\n" + body)
    with pytest.raises(DataError, match=needle):
        load_series(f)


def test_bad_header(tmp_path):
    f = tmp_path / "h.csv"
    f.write_text("id,attr,time,val\ns1,x,1,a\n")
    with pytest.raises(DataError, match="header"):
        load_series(f)


def test_labels(tmp_path, toy_files):
    f = tmp_path / "l.csv"
    f.write_text("seq_id,label\nid1,pos\nid2,maybe\n")
    with pytest.raises(DataError, match="row 3.*maybe"):
        read_labels(f)
    f.write_text("seq_id,label\nid1,pos\n")
    with pytest.raises(DataError, match="no label for sequence id2"):
        load_dataset(toy_files[0], f)


def test_symbol_outside_alphabet(toy_files):
    with pytest.raises(DatasetError):
        load_dataset(*toy_files, alphabet=AlphabetSpec.letters(4))


def test_numeric_detection(tmp_path):
    f = tmp_path / "raw.csv"
    write_long_csv([RawSeries("r1", {"x": [0.5, -1.25], "y": [3.0, 4.0]})], f)
    kind, items, attrs = load_series(f)
    assert kind == "numeric" and tuple(attrs) == ("x", "y")
    assert list(items[0].values["x"]) == [0.5, -1.25]
    g = tmp_path / "raw_wide.csv"
    write_wide_csv(items, g, attrs)
    assert load_series(g, "wide_csv")[0] == "numeric"
