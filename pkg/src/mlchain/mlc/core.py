"""Dataset container and trained multi-label model types."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

CC = "CC"
NS = "NS"


@dataclass(frozen=True)
class Dataset:
    """Dense features (n x d), binary labels (n x m) and label names."""

    features: np.ndarray
    labels: np.ndarray
    label_names: tuple = ()

    def __post_init__(self):
        X = np.asarray(self.features, dtype=np.float64)
        Y = np.asarray(self.labels)
        if X.ndim != 2 or Y.ndim != 2:
            raise ValueError("features and labels must both be 2-D matrices")
        n, d = X.shape
        if n < 1 or d < 1 or Y.shape[1] < 1:
            raise ValueError(f"dataset needs n, d, m >= 1; got n={n}, d={d}, m={Y.shape[1]}")
        if Y.shape[0] != n:
            raise ValueError(f"features have {n} rows but labels have {Y.shape[0]}")
        if not np.all(np.isfinite(X)):
            raise ValueError("features contain non-finite values")
        if not np.all((Y == 0) | (Y == 1)):
            raise ValueError("labels must be exactly 0 or 1")
        names = tuple(self.label_names) or tuple(f"y{j}" for j in range(Y.shape[1]))
        if len(names) != Y.shape[1]:
            raise ValueError(f"{len(names)} label names given for {Y.shape[1]} labels")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "labels", Y.astype(np.int8))
        object.__setattr__(self, "label_names", names)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]

    @property
    def m(self) -> int:
        return self.labels.shape[1]

    def subset(self, rows) -> "Dataset":
        rows = np.asarray(rows)
        return Dataset(self.features[rows], self.labels[rows], self.label_names)

    def with_labels(self, columns: Sequence[int]) -> "Dataset":
        columns = list(columns)
        return Dataset(
            self.features,
            self.labels[:, columns],
            tuple(self.label_names[j] for j in columns),
        )


def check_order(order, m: int) -> tuple:
    """Validate a chain order (a permutation of ``range(m)``) and return it as a tuple."""
    order = tuple(int(j) for j in order)
    if sorted(order) != list(range(m)):
        raise ValueError(f"chain order must be a permutation of 0..{m - 1}, got {order}")
    return order


def _as_rows(X, d: int) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != d:
        raise ValueError(f"expected inputs with {d} features, got shape {X.shape}")
    return X


@dataclass(frozen=True)
class BRModel:
    classifiers: tuple

    def __post_init__(self):
        object.__setattr__(self, "classifiers", tuple(self.classifiers))
        dims = {clf.d for clf in self.classifiers}
        if len(dims) != 1:
            raise ValueError("all binary relevance classifiers must share the input dimension")

    @property
    def d(self) -> int:
        return self.classifiers[0].d

    @property
    def m(self) -> int:
        return len(self.classifiers)


@dataclass(frozen=True)
class ChainModel:
    """Classifiers in chain order; the one at position j reads d + j inputs."""

    order: tuple
    classifiers: tuple
    strategy: str = CC

    def __post_init__(self):
        object.__setattr__(self, "classifiers", tuple(self.classifiers))
        m = len(self.classifiers)
        object.__setattr__(self, "order", check_order(self.order, m))
        if self.strategy not in (CC, NS):
            raise ValueError(f"unknown chain strategy {self.strategy!r}")
        d = self.classifiers[0].d
        for j, clf in enumerate(self.classifiers):
            if clf.d != d + j:
                raise ValueError(
                    f"classifier at chain position {j} has {clf.d} inputs, expected {d + j}"
                )

    @property
    def d(self) -> int:
        return self.classifiers[0].d

    @property
    def m(self) -> int:
        return len(self.classifiers)


@dataclass(frozen=True)
class StackingModel:
    level1: BRModel
    level2: tuple
    level2_targets: str = "predicted"

    def __post_init__(self):
        object.__setattr__(self, "level2", tuple(self.level2))
        d, m = self.level1.d, self.level1.m
        if len(self.level2) != m:
            raise ValueError("level 2 needs one classifier per label")
        for clf in self.level2:
            if clf.d != d + m:
                raise ValueError(f"level-2 classifier has {clf.d} inputs, expected {d + m}")

    @property
    def d(self) -> int:
        return self.level1.d

    @property
    def m(self) -> int:
        return self.level1.m


@dataclass(frozen=True)
class EnsembleModel:
    members: tuple
    threshold: float = 0.5
    member_seeds: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(self, "member_seeds", tuple(self.member_seeds))
        if not self.members:
            raise ValueError("an ensemble needs at least one member")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold}")
        if len({(mm.d, mm.m) for mm in self.members}) != 1:
            raise ValueError("ensemble members disagree on input or label dimension")

    @property
    def d(self) -> int:
        return self.members[0].d

    @property
    def m(self) -> int:
        return self.members[0].m

