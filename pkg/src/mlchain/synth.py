"""Two-dimensional synthetic multi-label data with tunable label dependence.

Each label j has a linear boundary through the origin::

    y_j = [a_j1 * x1 + a_j2 * x2 >= 0],   a_j1 = 1 - tau * r1,   a_j2 = tau * r2

with r1, r2 ~ U[0, 1] drawn per label. ``tau = 0`` gives every label the same
boundary (maximal dependence); ``tau = 1`` spreads the boundaries out. Inputs
are uniform on the unit disk, and each (instance, label) entry is flipped
independently with probability ``noise``.

All randomness comes from numpy's PCG64 bit generator
(``numpy.random.default_rng(seed)``), which is portable across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mlc.core import Dataset


@dataclass(frozen=True)
class SyntheticSpec:
    m: int
    tau: float
    noise: float
    coefficients: np.ndarray  # shape (m, 2): (a_j1, a_j2) per label
    seed: int = 0

    def __post_init__(self):
        _validate(self.m, self.tau, self.noise)
        a = np.array(self.coefficients, dtype=np.float64)
        if a.shape != (self.m, 2):
            raise ValueError(f"coefficients must have shape ({self.m}, 2), got {a.shape}")
        a.setflags(write=False)
        object.__setattr__(self, "coefficients", a)

    def clean_labels(self, X) -> np.ndarray:
        """Noise-free labels; also the Bayes-optimal prediction when noise < 0.5."""
        X = np.asarray(X, dtype=np.float64)
        return (X @ self.coefficients.T >= 0).astype(np.int8)


def _validate(m, tau, noise):
    if int(m) != m or m < 1:
        raise ValueError(f"label count must be a positive integer, got {m}")
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    if not 0.0 <= noise < 1.0:
        raise ValueError(f"noise must lie in [0, 1), got {noise}")


def make_spec(m: int, tau: float, noise: float = 0.1, seed: int = 0) -> SyntheticSpec:
    _validate(m, tau, noise)
    r = np.random.default_rng(seed).random((m, 2))
    coef = np.column_stack([1.0 - tau * r[:, 0], tau * r[:, 1]])
    return SyntheticSpec(int(m), float(tau), float(noise), coef, seed)


def sample_disk(n: int, rng: np.random.Generator) -> np.ndarray:
    """n points uniform on the closed unit disk."""
    radius = np.sqrt(rng.random(n))
    angle = 2.0 * np.pi * rng.random(n)
    X = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    # Guard the boundary against rounding past radius 1.
    norms = np.hypot(X[:, 0], X[:, 1])
    over = norms > 1.0
    X[over] /= norms[over, None]
    return X


def sample(spec: SyntheticSpec, n: int, seed: int = 0) -> Dataset:
    if int(n) != n or n < 1:
        raise ValueError(f"sample size must be a positive integer, got {n}")
    rng = np.random.default_rng(seed)
    X = sample_disk(int(n), rng)
    Y = spec.clean_labels(X)
    flips = rng.random(Y.shape) < spec.noise
    Y = np.where(flips, 1 - Y, Y)
    return Dataset(X, Y)


def bayes_loss(spec: SyntheticSpec, metric: str) -> float:
    """Expected loss of the Bayes-optimal predictor (the clean labeling)."""
    if not spec.noise < 0.5:
        raise ValueError("Bayes loss needs noise < 0.5; beyond that the optimal predictor inverts labels")
    if metric == "hamming":
        return spec.noise
    if metric == "subset01":
        return 1.0 - (1.0 - spec.noise) ** spec.m
    raise ValueError(f"bayes_loss supports 'hamming' and 'subset01', got {metric!r}")
