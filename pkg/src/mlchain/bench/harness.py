"""Repeated k-fold cross-validation of multi-label learners with paired t-tests."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .. import __version__
from ..data import kfold_indices
from ..linlearn import OptimizerConfig
from ..metrics import LOSSES, METRICS, Summary, instance_scores, summarize
from ..mlc import (
    Dataset,
    build_subset_pool,
    predict,
    subset_correct_batch,
    train_br,
    train_cc,
    train_ecc,
    train_ns,
    train_stacking,
)
from .tstats import TTestResult, paired_ttest

ALGORITHMS = ("br", "cc", "ns", "ecc", "stacking")
REPORT_SCHEMA = "mlchain.report"
REPORT_VERSION = 1


def derive_seed(*key: int) -> int:
    """Deterministic 32-bit seed for a work unit identified by integer ``key``."""
    return int(np.random.SeedSequence([int(k) for k in key]).generate_state(1)[0])


@dataclass(frozen=True)
class AlgorithmSpec:
    """What to train in each fold.

    ``order`` applies to the chain-based learners (cc, ns) and is
    ``"identity"``, ``"random"`` (a fresh seeded permutation per fold) or an
    explicit permutation. ``subset_correction=None`` inherits the run-level
    flag of :func:`run_cv`.
    """

    algo: str
    order: Union[str, tuple] = "identity"
    threshold: float = 0.5
    ensemble_size: int = 10
    config: OptimizerConfig = field(default_factory=OptimizerConfig)
    standardize: bool = False
    level2_targets: str = "predicted"
    subset_correction: Optional[bool] = None
    name: Optional[str] = None

    def __post_init__(self):
        if self.algo not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algo!r}; choose from {ALGORITHMS}")
        if not 0.0 < self.threshold < 1.0:
            raise ValueError(f"threshold must lie in (0, 1), got {self.threshold}")
        if isinstance(self.order, str) and self.order not in ("identity", "random"):
            raise ValueError(f"order must be 'identity', 'random' or a permutation, got {self.order!r}")
        if not isinstance(self.order, str):
            object.__setattr__(self, "order", tuple(int(j) for j in self.order))

    def label(self, subset_correction: bool) -> str:
        if self.name:
            return self.name
        base = self.algo.upper() if self.algo != "stacking" else "STACK"
        return base + ("_SC" if subset_correction else "")

    def to_dict(self) -> dict:
        return {
            "algo": self.algo,
            "order": self.order if isinstance(self.order, str) else list(self.order),
            "threshold": self.threshold,
            "ensemble_size": self.ensemble_size,
            "config": self.config.to_dict(),
            "standardize": self.standardize,
            "level2_targets": self.level2_targets,
        }


def _standardizer(X: np.ndarray):
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    sd[sd == 0] = 1.0
    return lambda Z: (Z - mu) / sd


def fit_algorithm(spec: AlgorithmSpec, train: Dataset, order_seed: int, ensemble_seed: int):
    """Train ``spec`` on ``train``; returns ``(model, transform)`` where
    ``transform`` maps raw test features into the model's input space."""
    transform = _standardizer(train.features) if spec.standardize else (lambda Z: Z)
    if spec.standardize:
        train = Dataset(transform(train.features), train.labels, train.label_names)
    if spec.algo == "br":
        return train_br(train, spec.config), transform
    if spec.algo == "stacking":
        return train_stacking(train, spec.config, spec.level2_targets), transform
    if spec.algo == "ecc":
        return (
            train_ecc(train, spec.ensemble_size, spec.threshold, spec.config, ensemble_seed),
            transform,
        )
    if spec.order == "identity":
        order = tuple(range(train.m))
    elif spec.order == "random":
        order = tuple(np.random.default_rng(order_seed).permutation(train.m))
    else:
        order = spec.order
    fit = train_cc if spec.algo == "cc" else train_ns
    return fit(train, order, spec.config), transform


@dataclass
class AlgorithmResult:
    name: str
    spec: AlgorithmSpec
    subset_correction: bool
    folds: dict  # metric -> list of per-fold test-set averages

    def summary(self, metric: str) -> Summary:
        return summarize(self.folds[metric])

    def to_dict(self) -> dict:
        out = {"spec": self.spec.to_dict(), "subset_correction": self.subset_correction, "metrics": {}}
        for metric in METRICS:
            s = self.summary(metric)
            out["metrics"][metric] = {"folds": list(self.folds[metric]), "mean": s.mean, "sd": s.sd}
        return out


@dataclass(frozen=True)
class Comparison:
    a: str
    b: str
    metric: str
    result: TTestResult
    mean_a: float
    mean_b: float

    @property
    def better(self) -> Optional[str]:
        """Name of the significantly better algorithm at level 0.05, if any."""
        if not self.result.significant(0.05) or self.mean_a == self.mean_b:
            return None
        a_lower = self.mean_a < self.mean_b
        return self.a if a_lower == (self.metric in LOSSES) else self.b

    def to_dict(self) -> dict:
        t = self.result.t
        return {
            "a": self.a,
            "b": self.b,
            "metric": self.metric,
            "t": t if math.isfinite(t) else ("+inf" if t > 0 else "-inf"),
            "dof": self.result.dof,
            "p": self.result.p,
            "exact_difference": self.result.exact_difference,
            "significant_0.05": self.result.significant(0.05),
            "significant_0.01": self.result.significant(0.01),
            "better": self.better,
        }


def compare(a: AlgorithmResult, b: AlgorithmResult) -> list:
    if len(a.folds["hamming"]) != len(b.folds["hamming"]):
        raise ValueError("compared algorithms were evaluated on different numbers of folds")
    return [
        Comparison(
            a.name,
            b.name,
            metric,
            paired_ttest(a.folds[metric], b.folds[metric]),
            float(np.mean(a.folds[metric])),
            float(np.mean(b.folds[metric])),
        )
        for metric in METRICS
    ]


@dataclass
class MetricsReport:
    results: dict  # name -> AlgorithmResult, in evaluation order
    comparisons: list
    provenance: dict
    audit: dict

    def __getitem__(self, name: str) -> AlgorithmResult:
        return self.results[name]

    def comparison(self, a: str, b: str, metric: str) -> Comparison:
        for c in self.comparisons:
            if (c.a, c.b, c.metric) == (a, b, metric):
                return c
        raise KeyError((a, b, metric))

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "version": REPORT_VERSION,
            "provenance": self.provenance,
            "algorithms": {name: r.to_dict() for name, r in self.results.items()},
            "significance": [c.to_dict() for c in self.comparisons],
            "audit": self.audit,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"


def run_cv(
    data: Dataset,
    algorithms: Union[AlgorithmSpec, Sequence[AlgorithmSpec]],
    folds: int = 10,
    repeats: int = 3,
    seed: int = 0,
    subset_correction: bool = False,
    dataset_name: Optional[str] = None,
) -> MetricsReport:
    """Evaluate each algorithm on the same ``repeats`` x ``folds`` splits.

    Every fold's label-subset pool is built from its training rows only. With
    subset correction enabled, each corrected prediction is checked against
    that pool; a violation raises ``RuntimeError``.
    """
    if isinstance(algorithms, AlgorithmSpec):
        algorithms = [algorithms]
    algorithms = list(algorithms)
    if not algorithms:
        raise ValueError("no algorithms to evaluate")
    if repeats < 1:
        raise ValueError("repeats must be at least 1")

    names = []
    for spec in algorithms:
        sc = subset_correction if spec.subset_correction is None else spec.subset_correction
        names.append((spec.label(sc), sc))
    if len({n for n, _ in names}) != len(names):
        raise ValueError(f"algorithm names must be unique, got {[n for n, _ in names]}")
    results = {
        name: AlgorithmResult(name, spec, sc, {m: [] for m in METRICS})
        for spec, (name, sc) in zip(algorithms, names)
    }
    checked = 0

    for r in range(repeats):
        splits = kfold_indices(data.n, folds, derive_seed(seed, r))
        for f, (train_idx, test_idx) in enumerate(splits):
            if np.intersect1d(train_idx, test_idx).size:
                raise RuntimeError("training and test folds overlap")
            train, test = data.subset(train_idx), data.subset(test_idx)
            pool = build_subset_pool(train.labels)
            order_seed = derive_seed(seed, r, f, 1)
            ens_seed = derive_seed(seed, r, f, 2)
            for spec, (name, sc) in zip(algorithms, names):
                model, transform = fit_algorithm(spec, train, order_seed, ens_seed)
                Yhat = predict(model, transform(test.features), spec.threshold)
                if sc:
                    Yhat = subset_correct_batch(Yhat, pool)
                    outside = sum(row not in pool for row in Yhat)
                    checked += len(Yhat)
                    if outside:
                        raise RuntimeError(f"{outside} subset-corrected predictions fall outside the training pool")
                scores = instance_scores(test.labels, Yhat)
                for metric in METRICS:
                    results[name].folds[metric].append(float(np.mean(scores[metric])))

    comparisons = []
    for a, b in itertools.combinations(results.values(), 2):
        comparisons.extend(compare(a, b))
    provenance = {
        "toolkit": "mlchain",
        "toolkit_version": __version__,
        "dataset": dataset_name,
        "n": data.n,
        "d": data.d,
        "m": data.m,
        "folds": folds,
        "repeats": repeats,
        "seed": seed,
        "sd_over": "folds",
    }
    audit = {
        "closed_world_checked": checked,
        "closed_world_violations": 0,
        "train_test_overlap": 0,
    }
    return MetricsReport(results, comparisons, provenance, audit)

