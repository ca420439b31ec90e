"""Example-based multi-label evaluation measures.

Hamming and subset 0/1 are losses; F1 and Jaccard are accuracies. When both
the true and the predicted label sets are empty, F1 and Jaccard are defined
as 1 (perfect agreement).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

METRICS = ("hamming", "subset01", "f1", "jaccard")
LOSSES = frozenset({"hamming", "subset01"})


def _pair(y, yhat):
    y = np.asarray(y)
    yhat = np.asarray(yhat)
    if y.shape != yhat.shape:
        raise ValueError(f"dimension mismatch: {y.shape} vs {yhat.shape}")
    if y.shape[-1] < 1:
        raise ValueError("label vectors must have at least one entry")
    return y.astype(bool), yhat.astype(bool)


def hamming_loss(y, yhat) -> float:
    y, yhat = _pair(y, yhat)
    return float(np.count_nonzero(y != yhat) / y.shape[-1])


def subset_zero_one(y, yhat) -> int:
    y, yhat = _pair(y, yhat)
    return int(np.any(y != yhat))


def f1_score(y, yhat) -> float:
    y, yhat = _pair(y, yhat)
    denom = int(y.sum() + yhat.sum())
    if denom == 0:
        return 1.0
    return 2 * int(np.count_nonzero(y & yhat)) / denom


def jaccard_score(y, yhat) -> float:
    y, yhat = _pair(y, yhat)
    union = int(np.count_nonzero(y | yhat))
    if union == 0:
        return 1.0
    return int(np.count_nonzero(y & yhat)) / union


def instance_scores(Y, Yhat) -> dict:
    """All four measures for every row of ``Y`` / ``Yhat``, as arrays keyed by metric name."""
    Y, Yhat = _pair(Y, Yhat)
    if Y.ndim != 2:
        raise ValueError("expected label matrices")
    m = Y.shape[1]
    mismatches = np.count_nonzero(Y != Yhat, axis=1)
    inter = np.count_nonzero(Y & Yhat, axis=1)
    union = np.count_nonzero(Y | Yhat, axis=1)
    sizes = Y.sum(axis=1) + Yhat.sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        f1 = np.where(sizes == 0, 1.0, 2 * inter / np.maximum(sizes, 1))
        jac = np.where(union == 0, 1.0, inter / np.maximum(union, 1))
    return {
        "hamming": mismatches / m,
        "subset01": (mismatches > 0).astype(np.float64),
        "f1": f1,
        "jaccard": jac,
    }


@dataclass(frozen=True)
class InstanceScore:
    hamming: float
    subset_zero_one: int
    f1: float
    jaccard: float

    @classmethod
    def of(cls, y, yhat) -> "InstanceScore":
        return cls(hamming_loss(y, yhat), subset_zero_one(y, yhat), f1_score(y, yhat), jaccard_score(y, yhat))

    def get(self, metric: str) -> float:
        return float(getattr(self, "subset_zero_one" if metric == "subset01" else metric))


@dataclass(frozen=True)
class Summary:
    mean: float
    sd: float
    count: int


def summarize(values) -> Summary:
    """Mean and sample (n - 1) standard deviation; sd is 0 for a single value."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        raise ValueError("cannot summarize an empty sequence")
    sd = float(np.std(v, ddof=1)) if v.size > 1 else 0.0
    return Summary(float(np.mean(v)), sd, int(v.size))


def aggregate(scores) -> dict:
    """Per-metric :class:`Summary` over a non-empty list of :class:`InstanceScore`."""
    scores = list(scores)
    if not scores:
        raise ValueError("cannot aggregate an empty list of scores")
    return {metric: summarize([s.get(metric) for s in scores]) for metric in METRICS}


def mean_scores(Y, Yhat) -> dict:
    """Test-set values: the per-instance measures averaged over rows."""
    return {k: float(np.mean(v)) for k, v in instance_scores(Y, Yhat).items()}
