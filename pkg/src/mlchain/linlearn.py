"""L2-regularized logistic regression, the binary base learner.

The objective minimised by :func:`train_binary` is::

    f(w, b) = mean_i [ log(1 + exp(z_i)) - y_i * z_i ] + (lam / 2) * ||w||^2
    z_i     = b + <w, x_i>

The bias is not regularized. Training is full-batch and deterministic: the
same problem and config always produce a bit-identical model.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

STEP_RULES = ("backtracking", "newton")


def sigmoid(z):
    """Numerically stable logistic function (scalar or array)."""
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class BinaryProblem:
    """A binary classification problem: ``features`` (n x d) and 0/1 ``targets``."""

    features: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.features, dtype=np.float64)
        y = np.asarray(self.targets)
        if X.ndim != 2:
            raise ValueError(f"features must be a 2-D matrix, got shape {X.shape}")
        n, d = X.shape
        if n < 1 or d < 1:
            raise ValueError(f"empty problem: features have shape {X.shape}")
        if y.shape != (n,):
            raise ValueError(f"targets must have shape ({n},), got {y.shape}")
        if not np.all(np.isfinite(X)):
            raise ValueError("features contain non-finite values")
        if not np.all((y == 0) | (y == 1)):
            raise ValueError("targets must be exactly 0 or 1")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "targets", y.astype(np.float64))

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def d(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class OptimizerConfig:
    """Solver settings.

    ``step_rule`` is ``"backtracking"`` (gradient descent with Armijo
    backtracking) or ``"newton"`` (damped Newton steps with the same line
    search). Both are deterministic.
    """

    max_iterations: int = 1000
    gradient_tolerance: float = 1e-6
    step_rule: str = "backtracking"
    regularization: float = 1e-4

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if not self.gradient_tolerance > 0:
            raise ValueError("gradient_tolerance must be positive")
        if self.step_rule not in STEP_RULES:
            raise ValueError(f"step_rule must be one of {STEP_RULES}, got {self.step_rule!r}")
        if not (self.regularization >= 0 and np.isfinite(self.regularization)):
            raise ValueError("regularization must be a nonnegative finite number")

    def to_dict(self) -> dict:
        return {
            "max_iterations": self.max_iterations,
            "gradient_tolerance": self.gradient_tolerance,
            "step_rule": self.step_rule,
            "regularization": self.regularization,
        }


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray
    bias: float = 0.0
    regularization: float = 0.0
    iterations: int = 0
    objective: float = float("nan")
    converged: bool = False

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.float64).ravel()
        if not (np.all(np.isfinite(w)) and np.isfinite(self.bias)):
            raise ValueError("model parameters must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", float(self.bias))

    @classmethod
    def zeros(cls, d: int, regularization: float = 0.0) -> "LinearModel":
        return cls(np.zeros(d), 0.0, regularization)

    @property
    def d(self) -> int:
        return self.weights.shape[0]

    def decision_function(self, X) -> np.ndarray:
        X = _check_inputs(self, X)
        return X @ self.weights + self.bias

    def predict_proba(self, X) -> np.ndarray:
        return sigmoid(self.decision_function(X))

    def predict(self, X, threshold: float = 0.5) -> np.ndarray:
        _check_threshold(threshold)
        return (self.predict_proba(X) >= threshold).astype(np.int8)

    def __eq__(self, other):
        if not isinstance(other, LinearModel):
            return NotImplemented
        return (
            np.array_equal(self.weights, other.weights)
            and self.bias == other.bias
            and self.regularization == other.regularization
        )

    __hash__ = None


def _check_inputs(model: LinearModel, X) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.shape[1] != model.d:
        raise ValueError(f"expected inputs with {model.d} features, got shape {X.shape}")
    return X


def _check_threshold(threshold: float) -> None:
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")


def predict_proba(model: LinearModel, x) -> float:
    """Probability of the positive class for a single feature vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"expected a feature vector, got shape {x.shape}")
    return float(model.predict_proba(x)[0])


def predict_label(model: LinearModel, x, threshold: float = 0.5) -> int:
    """1 iff the positive-class probability reaches ``threshold`` (ties map to 1)."""
    _check_threshold(threshold)
    return int(predict_proba(model, x) >= threshold)


def _objective(theta, X, y, lam):
    z = X @ theta[:-1] + theta[-1]
    w = theta[:-1]
    return float(np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * lam * (w @ w))


def _objective_grad(theta, X, y, lam):
    n = X.shape[0]
    w = theta[:-1]
    z = X @ w + theta[-1]
    loss = float(np.mean(np.logaddexp(0.0, z) - y * z) + 0.5 * lam * (w @ w))
    r = sigmoid(z) - y
    grad = np.empty_like(theta)
    grad[:-1] = X.T @ r / n + lam * w
    grad[-1] = r.sum() / n
    return loss, grad, z


def loss_and_gradient(model: LinearModel, problem: BinaryProblem):
    """Regularized mean cross-entropy and its gradient w.r.t. ``(weights, bias)``.

    The returned gradient has ``d + 1`` entries; the last one is the bias
    component. The regularization strength is taken from ``model``.
    """
    if model.d != problem.d:
        raise ValueError(f"model has {model.d} weights but problem has {problem.d} features")
    theta = np.append(model.weights, model.bias)
    loss, grad, _ = _objective_grad(theta, problem.features, problem.targets, model.regularization)
    return loss, grad


def _newton_direction(X, z, grad, lam):
    n, d = X.shape
    s = sigmoid(z)
    wts = s * (1.0 - s) / n
    Xb = np.hstack([X, np.ones((n, 1))])
    H = (Xb * wts[:, None]).T @ Xb
    H[np.arange(d), np.arange(d)] += lam
    # Tiny ridge keeps the bias block solvable when all probabilities saturate.
    H[np.arange(d + 1), np.arange(d + 1)] += 1e-12
    try:
        return np.linalg.solve(H, grad)
    except np.linalg.LinAlgError:
        return grad


def train_binary(
    problem: BinaryProblem,
    config: OptimizerConfig = OptimizerConfig(),
    callback: Optional[Callable[[int, float], None]] = None,
) -> LinearModel:
    """Fit a logistic regression model to ``problem``.

    Starts from the zero model and iterates until the gradient norm drops
    below ``config.gradient_tolerance`` or ``config.max_iterations`` steps
    have been taken. Every accepted step satisfies the Armijo condition, so
    the objective never increases. ``callback(iteration, objective)`` is
    invoked once for the starting point and once per accepted step.
    """
    if not isinstance(problem, BinaryProblem):
        raise TypeError("problem must be a BinaryProblem")
    X, y, lam = problem.features, problem.targets, config.regularization
    n, d = X.shape
    theta = np.zeros(d + 1)
    f, g, z = _objective_grad(theta, X, y, lam)
    if callback is not None:
        callback(0, f)

    # Inverse of an upper bound on the gradient's Lipschitz constant.
    lipschitz = 0.25 * (np.sum(X * X) / n + 1.0) + lam
    step = 1.0 / lipschitz
    newton = config.step_rule == "newton"

    it = 0
    converged = False
    while True:
        gnorm = float(np.sqrt(g @ g))
        if gnorm < config.gradient_tolerance:
            converged = True
            break
        if it >= config.max_iterations:
            break
        if newton:
            direction = _newton_direction(X, z, g, lam)
            t = 1.0
        else:
            direction = g
            step *= 2.0
            t = step
        slope = float(g @ direction)
        if slope <= 0:
            direction, slope = g, gnorm * gnorm
        while True:
            cand = theta - t * direction
            fc = _objective(cand, X, y, lam)
            if fc <= f - 1e-4 * t * slope:
                break
            t *= 0.5
            if t < 1e-30:
                break
        if fc > f or t < 1e-30:
            # No descent possible at machine precision.
            break
        if not newton:
            step = t
        theta = cand
        it += 1
        f, g, z = _objective_grad(theta, X, y, lam)
        if callback is not None:
            callback(it, f)

    return LinearModel(
        weights=theta[:-1].copy(),
        bias=float(theta[-1]),
        regularization=lam,
        iterations=it,
        objective=f,
        converged=converged,
    )
