"""CSV ingestion and serialization for symbolic and real-valued sequence data.

``long_csv``: header ``seq_id,attribute,t,value``, one row per observation.
``wide_csv``: header ``seq_id,t,<attr1>,<attr2>,...``, one row per time step.
Labels come from a separate ``seq_id,label`` file with labels ``pos``/``neg``.
"""
from __future__ import annotations

import csv
from collections import OrderedDict
from pathlib import Path

from .core import (AlphabetSpec, AttributeSet, Dataset, DatasetError, Label, LabeledExample, Mvs,
                   validate_dataset)
from .sax import RawSeries


class DataError(ValueError):
    """A data file could not be read; ``errors`` lists row-annotated problems."""

    def __init__(self, errors: list[str]):
        self.errors = errors
        shown = "; ".join(errors[:5])
        more = f" (+{len(errors) - 5} more)" if len(errors) > 5 else ""
        super().__init__(f"{shown}{more}")


def _read_rows(path) -> tuple[list[str], list[tuple[int, list[str]]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        rows = [(i, row) for i, row in enumerate(reader, start=1) if any(c.strip() for c in row)]
    if not rows:
        raise DataError([f"{path}: no rows"])
    header = [c.strip() for c in rows[0][1]]
    if len(rows) == 1:
        raise DataError([f"{path}: no rows after the header"])
    return header, rows[1:]


def _cells_long(path):
    header, rows = _read_rows(path)
    expected = ["seq_id", "attribute", "t", "value"]
    if header != expected:
        raise DataError([f"{path}: row 1: expected header {','.join(expected)}, got {','.join(header)}"])
    for lineno, row in rows:
        yield lineno, row


def _cells_wide(path):
    header, rows = _read_rows(path)
    if header[:2] != ["seq_id", "t"] or len(header) < 3:
        raise DataError([f"{path}: row 1: expected header seq_id,t,<attributes...>"])
    attrs = header[2:]
    for lineno, row in rows:
        if len(row) != len(header):
            raise DataError([f"{path}: row {lineno}: expected {len(header)} cells, got {len(row)}"])
        for attr, value in zip(attrs, row[2:]):
            yield lineno, [row[0], attr, row[1], value]


def _collect(cells, path):
    """Group cells into ``{seq_id: {attr: {t: (value, row)}}}``, reporting malformed rows."""
    errors = []
    data: "OrderedDict[str, OrderedDict[str, dict]]" = OrderedDict()
    attr_order: list[str] = []
    for lineno, row in cells:
        if len(row) != 4:
            errors.append(f"{path}: row {lineno}: expected 4 cells, got {len(row)}")
            continue
        sid, attr, t_text, value = (c.strip() for c in row)
        if not sid or not attr or not t_text:
            errors.append(f"{path}: row {lineno}: missing cell")
            continue
        if value == "":
            errors.append(f"{path}: row {lineno}: missing value for ({sid}, {attr}, t={t_text})")
            continue
        try:
            t = int(t_text)
        except ValueError:
            errors.append(f"{path}: row {lineno}: time index {t_text!r} is not an integer")
            continue
        if attr not in attr_order:
            attr_order.append(attr)
        slot = data.setdefault(sid, OrderedDict()).setdefault(attr, {})
        if t in slot:
            errors.append(f"{path}: row {lineno}: duplicate cell ({sid}, {attr}, t={t})")
            continue
        slot[t] = (value, lineno)
    for sid, per_attr in data.items():
        for attr, cells_by_t in per_attr.items():
            for expected, t in enumerate(sorted(cells_by_t), start=1):
                if t != expected:
                    row = cells_by_t[t][1]
                    errors.append(f"{path}: row {row}: non-contiguous time index t={t} for ({sid}, {attr}); "
                                  f"expected t={expected}")
                    break
        lengths = {len(c) for c in per_attr.values()}
        missing = [a for a in attr_order if a not in per_attr]
        if missing:
            errors.append(f"{path}: sequence {sid}: missing cells for attributes {missing}")
        elif len(lengths) > 1:
            errors.append(f"{path}: sequence {sid}: attributes have different lengths {sorted(lengths)}")
    if errors:
        raise DataError(errors)
    return data, attr_order


def read_labels(path) -> "OrderedDict[str, Label]":
    header, rows = _read_rows(path)
    if header != ["seq_id", "label"]:
        raise DataError([f"{path}: row 1: expected header seq_id,label"])
    labels: "OrderedDict[str, Label]" = OrderedDict()
    errors = []
    for lineno, row in rows:
        if len(row) != 2:
            errors.append(f"{path}: row {lineno}: expected 2 cells, got {len(row)}")
            continue
        sid, text = row[0].strip(), row[1].strip()
        if text not in ("pos", "neg"):
            errors.append(f"{path}: row {lineno}: unknown label {text!r} (expected pos or neg)")
            continue
        if sid in labels:
            errors.append(f"{path}: row {lineno}: duplicate label for {sid}")
            continue
        labels[sid] = Label(text)
    if errors:
        raise DataError(errors)
    return labels


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_series(path, format: str = "long_csv", kind: str = "auto"):
    """Read sequences without labels.

    Returns ``("symbolic", [Mvs...], attributes)`` or ``("numeric", [RawSeries...], attributes)``.
    ``kind="auto"`` treats the file as numeric when every value parses as a float.
    """
    if format == "long_csv":
        cells = _cells_long(path)
    elif format == "wide_csv":
        cells = _cells_wide(path)
    else:
        raise ValueError(f"unknown format {format!r}")
    data, attrs = _collect(cells, path)
    if kind == "auto":
        kind = "numeric" if all(_is_number(v) for per in data.values() for c in per.values()
                                for v, _ in c.values()) else "symbolic"
    items = []
    for sid, per_attr in data.items():
        if kind == "numeric":
            values = {a: [float(per_attr[a][t][0]) for t in sorted(per_attr[a])] for a in attrs}
            items.append(RawSeries(sid, values))
        else:
            values = {a: tuple(per_attr[a][t][0] for t in sorted(per_attr[a])) for a in attrs}
            items.append(Mvs(sid, values))
    return kind, items, AttributeSet(tuple(attrs))


def attach_labels(sequences, labels, path_hint: str = "labels") -> list[tuple]:
    errors = []
    ids = [s.id for s in sequences]
    for sid in ids:
        if sid not in labels:
            errors.append(f"{path_hint}: no label for sequence {sid}")
    known = set(ids)
    for sid in labels:
        if sid not in known:
            errors.append(f"{path_hint}: label for unknown sequence {sid}")
    if errors:
        raise DataError(errors)
    return [(s, labels[s.id]) for s in sequences]


def load_dataset(path, labels_path, format: str = "long_csv",
                 alphabet: AlphabetSpec | None = None) -> Dataset:
    """Load a labeled symbolic dataset. Without ``alphabet``, the sorted observed symbols are used."""
    kind, seqs, attrs = load_series(path, format, kind="symbolic")
    labels = read_labels(labels_path)
    pairs = attach_labels(seqs, labels, str(labels_path))
    if alphabet is None:
        alphabet = AlphabetSpec(tuple(sorted({s for m in seqs for v in m.values.values() for s in v})))
    ds = Dataset(tuple(LabeledExample(m, lab) for m, lab in pairs), alphabet, attrs)
    violations = validate_dataset(ds)
    if violations:
        raise DatasetError(violations)
    return ds


def write_long_csv(sequences, path, attributes=None):
    """Write ``Mvs`` or ``RawSeries`` objects in long format."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["seq_id", "attribute", "t", "value"])
        for s in sequences:
            attrs = list(attributes) if attributes is not None else list(s.values)
            for a in attrs:
                for t, v in enumerate(s.values[a], start=1):
                    w.writerow([s.id, a, t, repr(v) if isinstance(v, float) else v])


def write_wide_csv(sequences, path, attributes):
    attrs = list(attributes)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["seq_id", "t", *attrs])
        for s in sequences:
            n = max(len(s.values[a]) for a in attrs)
            for t in range(n):
                w.writerow([s.id, t + 1, *(s.values[a][t] for a in attrs)])


def write_labels(examples, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["seq_id", "label"])
        for ex in examples:
            w.writerow([ex.id, ex.label.value])


def save_dataset(ds: Dataset, path, labels_path, format: str = "long_csv"):
    seqs = [ex.mvs for ex in ds]
    if format == "long_csv":
        write_long_csv(seqs, path, ds.attributes)
    else:
        write_wide_csv(seqs, path, ds.attributes)
    write_labels(ds.examples, labels_path)


def read_text(path) -> str:
    return Path(path).read_text(encoding="utf-8")
