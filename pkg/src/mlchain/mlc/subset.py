"""Label-subset pools and subset correction.

Subset correction snaps a predicted label vector onto the closest label
combination (in Hamming distance) that was observed in the training data.
Among equally close candidates the one seen more often in training wins; if
that still ties, the one that occurred first in the training rows wins.
"""

from __future__ import annotations

import math

import numpy as np


class LabelSubsetPool:
    """Distinct label rows with their counts, in order of first occurrence."""

    def __init__(self, subsets, counts):
        subsets = np.asarray(subsets, dtype=np.int8)
        counts = np.asarray(counts, dtype=np.int64)
        if subsets.ndim != 2 or subsets.shape[0] != counts.shape[0]:
            raise ValueError("subsets must be a (u, m) matrix with one count per row")
        if np.any(counts < 1):
            raise ValueError("every subset count must be at least 1")
        if not np.all((subsets == 0) | (subsets == 1)):
            raise ValueError("subsets must be binary")
        self._index = {row.tobytes(): i for i, row in enumerate(subsets)}
        if len(self._index) != subsets.shape[0]:
            raise ValueError("subsets must be pairwise distinct")
        subsets.setflags(write=False)
        counts.setflags(write=False)
        self.subsets = subsets
        self.counts = counts
        # Pool positions ranked by (count desc, first occurrence asc), so that
        # argmin over distances in this order resolves the whole tie cascade.
        self._rank = np.lexsort((np.arange(len(counts)), -counts))

    @property
    def m(self) -> int:
        return self.subsets.shape[1]

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __len__(self) -> int:
        return self.subsets.shape[0]

    def __contains__(self, vector) -> bool:
        v = np.asarray(vector, dtype=np.int8)
        return v.shape == (self.m,) and v.tobytes() in self._index

    def count(self, vector) -> int:
        v = np.asarray(vector, dtype=np.int8)
        i = self._index.get(v.tobytes())
        return 0 if i is None else int(self.counts[i])

    def observation_rate(self) -> float:
        """Number of distinct subsets divided by 2**m."""
        return math.ldexp(len(self), -self.m)

    def __repr__(self) -> str:
        return f"LabelSubsetPool(m={self.m}, distinct={len(self)}, rows={self.total})"


def build_subset_pool(labels) -> LabelSubsetPool:
    Y = np.asarray(labels, dtype=np.int8)
    if Y.ndim != 2 or Y.shape[0] < 1 or Y.shape[1] < 1:
        raise ValueError(f"labels must be a non-empty 2-D binary matrix, got shape {Y.shape}")
    if not np.all((Y == 0) | (Y == 1)):
        raise ValueError("labels must be binary")
    seen: dict = {}
    rows = []
    for row in Y:
        key = row.tobytes()
        if key in seen:
            seen[key] += 1
        else:
            seen[key] = 1
            rows.append(row)
    return LabelSubsetPool(np.array(rows), list(seen.values()))


def subset_correct_batch(predictions, pool: LabelSubsetPool) -> np.ndarray:
    """Vectorised :func:`subset_correct` over the rows of ``predictions``."""
    if len(pool) == 0:
        raise ValueError("cannot correct against an empty pool")
    P = np.asarray(predictions, dtype=np.int64)
    if P.ndim != 2 or P.shape[1] != pool.m:
        raise ValueError(f"predictions must have {pool.m} columns, got shape {P.shape}")
    if not np.all((P == 0) | (P == 1)):
        raise ValueError("predictions must be binary")
    S = pool.subsets[pool._rank].astype(np.int64)
    out = np.empty(P.shape, dtype=np.int8)
    chunk = max(1, 2_000_000 // max(1, len(pool)))
    s_ones = S.sum(axis=1)
    for start in range(0, P.shape[0], chunk):
        block = P[start:start + chunk]
        dist = block.sum(axis=1)[:, None] + s_ones[None, :] - 2 * (block @ S.T)
        out[start:start + chunk] = S[np.argmin(dist, axis=1)]
    return out


def subset_correct(prediction, pool: LabelSubsetPool) -> np.ndarray:
    """Closest observed label subset to ``prediction`` (see module docstring)."""
    p = np.asarray(prediction)
    if p.ndim != 1:
        raise ValueError(f"expected a single label vector, got shape {p.shape}")
    return subset_correct_batch(p[None, :], pool)[0]
