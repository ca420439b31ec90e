"""Dataset I/O (CSV, dense ARFF), dataset statistics and k-fold splitting.

CSV layout: comma separated, '.' as decimal point, one instance per line,
the d feature columns first and the m label columns last. An optional
header line is recognised when any of its fields is not a number; its last
m fields become the label names.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .mlc.core import Dataset
from .mlc.subset import build_subset_pool


class DataFormatError(ValueError):
    """Raised for malformed dataset files; the message names the offending line."""


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _parse_float(text: str, lineno: int, col: int) -> float:
    t = text.strip()
    if t in ("", "?"):
        raise DataFormatError(f"line {lineno}: missing value in column {col + 1}")
    try:
        v = float(t)
    except ValueError:
        raise DataFormatError(f"line {lineno}: non-numeric value {t!r} in column {col + 1}") from None
    if not math.isfinite(v):
        raise DataFormatError(f"line {lineno}: non-finite value {t!r} in column {col + 1}")
    return v


def _parse_label(text: str, lineno: int, col: int) -> int:
    t = text.strip().strip("'\"")
    if t in ("", "?"):
        raise DataFormatError(f"line {lineno}: missing label value in column {col + 1}")
    try:
        v = float(t)
    except ValueError:
        v = None
    if v not in (0.0, 1.0):
        raise DataFormatError(f"line {lineno}: label value {t!r} in column {col + 1} is not 0 or 1")
    return int(v)


def _build(rows, label_names=()):
    if not rows:
        raise DataFormatError("no data rows")
    X = np.array([r[0] for r in rows], dtype=np.float64)
    Y = np.array([r[1] for r in rows], dtype=np.int8)
    return Dataset(X, Y, tuple(label_names))


def load_csv(path, label_count: int) -> Dataset:
    if label_count < 1:
        raise ValueError("label_count must be at least 1")
    rows = []
    names: tuple = ()
    width = None
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, fields in enumerate(csv.reader(fh), start=1):
            if not fields or all(not f.strip() for f in fields):
                continue
            if width is None:
                width = len(fields)
                if width <= label_count:
                    raise DataFormatError(
                        f"line {lineno}: {width} columns cannot hold features plus {label_count} labels"
                    )
                if not all(_is_number(f) for f in fields):
                    names = tuple(f.strip() for f in fields[-label_count:])
                    continue
            elif len(fields) != width:
                raise DataFormatError(f"line {lineno}: expected {width} columns, found {len(fields)}")
            d = width - label_count
            feats = [_parse_float(f, lineno, c) for c, f in enumerate(fields[:d])]
            labs = [_parse_label(f, lineno, d + c) for c, f in enumerate(fields[d:])]
            rows.append((feats, labs))
    return _build(rows, names)


def save_csv(data: Dataset, path, header: bool = True) -> None:
    """Write ``data`` so that :func:`load_csv` restores identical values."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow([f"x{i}" for i in range(data.d)] + list(data.label_names))
        for x, y in zip(data.features, data.labels):
            w.writerow([repr(float(v)) for v in x] + [str(int(v)) for v in y])


_NUMERIC_TYPES = {"numeric", "real", "integer"}


def _split_attribute(rest: str, lineno: int):
    rest = rest.strip()
    if rest[:1] in ("'", '"'):
        q = rest[0]
        end = rest.find(q, 1)
        if end < 0:
            raise DataFormatError(f"line {lineno}: unterminated quoted attribute name")
        return rest[1:end], rest[end + 1:].strip()
    parts = rest.split(None, 1)
    if len(parts) != 2:
        raise DataFormatError(f"line {lineno}: attribute declaration without a type")
    return parts[0], parts[1].strip()


def _attribute_kind(typ: str, lineno: int) -> str:
    if typ.startswith("{"):
        if not typ.endswith("}"):
            raise DataFormatError(f"line {lineno}: malformed nominal specification {typ!r}")
        values = {v.strip().strip("'\"") for v in typ[1:-1].split(",")}
        if not values <= {"0", "1"}:
            raise DataFormatError(
                f"line {lineno}: unsupported nominal attribute {typ!r}; only {{0,1}} is supported"
            )
        return "binary"
    base = typ.split()[0].lower()
    if base in _NUMERIC_TYPES:
        return "numeric"
    raise DataFormatError(f"line {lineno}: unsupported attribute type {typ.split()[0]!r}")


def load_arff(path, label_count: int, labels_at: str = "back") -> Dataset:
    """Read a dense ARFF file with numeric and ``{0,1}`` nominal attributes only.

    The ``label_count`` label attributes are the last ones (``labels_at="back"``,
    the usual MULAN layout) or the first ones (``"front"``, the MEKA layout).
    Sparse instances, string/date/relational attributes and missing values
    are rejected.
    """
    if labels_at not in ("front", "back"):
        raise ValueError(f"labels_at must be 'front' or 'back', got {labels_at!r}")
    attrs = []
    rows = []
    in_data = False
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("%"):
                continue
            if not in_data:
                low = line.lower()
                if low.startswith("@relation"):
                    continue
                if low.startswith("@attribute"):
                    name, typ = _split_attribute(line[len("@attribute"):], lineno)
                    attrs.append((name, _attribute_kind(typ, lineno)))
                    continue
                if low.startswith("@data"):
                    in_data = True
                    if len(attrs) <= label_count:
                        raise DataFormatError(
                            f"line {lineno}: {len(attrs)} attributes cannot hold features plus {label_count} labels"
                        )
                    continue
                raise DataFormatError(f"line {lineno}: unexpected header line {line[:40]!r}")
            if line.startswith("{"):
                raise DataFormatError(f"line {lineno}: sparse format unsupported")
            fields = next(csv.reader([line], skipinitialspace=True, quotechar="'"))
            if len(fields) != len(attrs):
                raise DataFormatError(
                    f"line {lineno}: expected {len(attrs)} values, found {len(fields)}"
                )
            vals = [_parse_float(f.strip().strip("'\""), lineno, c) for c, f in enumerate(fields)]
            if labels_at == "back":
                lab_idx = range(len(attrs) - label_count, len(attrs))
            else:
                lab_idx = range(label_count)
            labels = [_parse_label(fields[c], lineno, c) for c in lab_idx]
            lab_set = set(lab_idx)
            feats = [v for c, v in enumerate(vals) if c not in lab_set]
            rows.append((feats, labels))
    if not in_data:
        raise DataFormatError("no @data section")
    if labels_at == "back":
        names = [a[0] for a in attrs[-label_count:]]
    else:
        names = [a[0] for a in attrs[:label_count]]
    return _build(rows, names)


def load(path, label_count: int, fmt: str = "csv", labels_at: str = "back") -> Dataset:
    if fmt == "csv":
        return load_csv(path, label_count)
    if fmt == "arff":
        return load_arff(path, label_count, labels_at)
    raise ValueError(f"unknown dataset format {fmt!r}")


@dataclass(frozen=True)
class DatasetStats:
    n: int
    d: int
    m: int
    cardinality: float
    observation_rate: float
    distinct_subsets: int

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "m": self.m,
            "cardinality": self.cardinality,
            "observation_rate": self.observation_rate,
            "distinct_subsets": self.distinct_subsets,
        }


def stats(data: Dataset) -> DatasetStats:
    pool = build_subset_pool(data.labels)
    return DatasetStats(
        n=data.n,
        d=data.d,
        m=data.m,
        cardinality=float(data.labels.sum(axis=1).mean()),
        observation_rate=pool.observation_rate(),
        distinct_subsets=len(pool),
    )


def kfold_indices(n: int, k: int, seed: int = 0):
    """Shuffled, non-stratified k-fold split as a list of (train, test) index arrays.

    Fold sizes differ by at most one. Index arrays are sorted.
    """
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    perm = np.random.default_rng(seed).permutation(n)
    folds = []
    for test in np.array_split(perm, k):
        mask = np.ones(n, dtype=bool)
        mask[test] = False
        folds.append((np.flatnonzero(mask), np.sort(test)))
    return folds
