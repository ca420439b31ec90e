"""Error-propagation experiments: position-wise chain error and label-count scaling."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from ..data import kfold_indices
from ..linlearn import OptimizerConfig
from ..metrics import instance_scores
from ..mlc import Dataset, predict_br, predict_chain, train_br, train_cc, train_ns
from ..synth import bayes_loss, make_spec, sample
from .harness import derive_seed

DEFAULT_M_VALUES = (5, 10, 15, 20, 25)


@dataclass
class PositionCurve:
    """Relative increase of per-label error of CC over BR, by chain position.

    ``values[o, p]`` is the relative increase for the label at position ``p``
    under order ``o`` (NaN where that label has zero BR error and is
    excluded). ``mean``/``stderr``/``counts`` aggregate over orders.
    """

    values: np.ndarray
    orders: np.ndarray
    br_error: np.ndarray
    folds: int

    @property
    def m(self) -> int:
        return self.values.shape[1]

    @property
    def counts(self) -> np.ndarray:
        return np.sum(~np.isnan(self.values), axis=0)

    @property
    def mean(self) -> np.ndarray:
        with np.errstate(invalid="ignore"):
            return np.array([np.nanmean(c) if np.any(~np.isnan(c)) else np.nan for c in self.values.T])

    @property
    def stderr(self) -> np.ndarray:
        out = np.full(self.m, np.nan)
        for p, col in enumerate(self.values.T):
            col = col[~np.isnan(col)]
            if col.size > 1:
                out[p] = np.std(col, ddof=1) / np.sqrt(col.size)
            elif col.size == 1:
                out[p] = 0.0
        return out

    @property
    def excluded_labels(self) -> list:
        return [int(j) for j in np.flatnonzero(self.br_error == 0)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["position", "mean_relative_increase", "stderr", "orders_counted"])
        for p, (mu, se, c) in enumerate(zip(self.mean, self.stderr, self.counts), start=1):
            w.writerow([p, repr(float(mu)), repr(float(se)), int(c)])
        return buf.getvalue()


def _pooled_label_error(blocks) -> np.ndarray:
    Y = np.vstack([b[0] for b in blocks])
    Yhat = np.vstack([b[1] for b in blocks])
    return np.mean(Y != Yhat, axis=0)


def chain_position_experiment(
    data: Dataset,
    n_orders: int = 100,
    seed: int = 0,
    config: OptimizerConfig = OptimizerConfig(),
    folds: int = 2,
    threshold: float = 0.5,
) -> PositionCurve:
    """Train CC under ``n_orders`` seeded random label orders and measure, per
    chain position, how much the held-out 0/1 error of the label at that
    position exceeds its BR error, relative to the BR error.

    Held-out errors are pooled over a ``folds``-fold split of ``data``; BR is
    trained once per split and reused for every order. Labels whose BR error
    is zero are excluded (their relative increase is undefined).
    """
    if n_orders < 1:
        raise ValueError("n_orders must be at least 1")
    splits = kfold_indices(data.n, folds, derive_seed(seed, 0))
    trains = [data.subset(tr) for tr, _ in splits]
    tests = [data.subset(te) for _, te in splits]

    br_blocks = []
    for train, test in zip(trains, tests):
        br = train_br(train, config)
        br_blocks.append((test.labels, predict_br(br, test.features, threshold)))
    br_err = _pooled_label_error(br_blocks)

    rng = np.random.default_rng(derive_seed(seed, 1))
    orders = np.array([rng.permutation(data.m) for _ in range(n_orders)])
    values = np.full((n_orders, data.m), np.nan)
    for o, order in enumerate(orders):
        blocks = []
        for train, test in zip(trains, tests):
            cc = train_cc(train, order, config)
            blocks.append((test.labels, predict_chain(cc, test.features, threshold)))
        cc_err = _pooled_label_error(blocks)
        for p, label in enumerate(order):
            if br_err[label] > 0:
                values[o, p] = (cc_err[label] - br_err[label]) / br_err[label]
    return PositionCurve(values, orders, br_err, folds)


SCALING_ALGORITHMS = ("BR", "CC", "NS")
SCALING_METRICS = ("hamming", "subset01")


@dataclass
class ScalingTable:
    """Test losses from the label-count sweep, raw and divided by the Bayes loss.

    ``raw[(m, algorithm, metric)]`` and ``normalized[...]`` hold one value per
    repetition.
    """

    m_values: tuple
    tau: float
    noise: float
    repetitions: int
    train_n: int
    test_n: int
    seed: int
    raw: dict = field(default_factory=dict)
    normalized: dict = field(default_factory=dict)
    bayes: dict = field(default_factory=dict)

    def rows(self):
        for m in self.m_values:
            for algo in SCALING_ALGORITHMS:
                for metric in SCALING_METRICS:
                    norm = np.asarray(self.normalized[(m, algo, metric)])
                    raw = np.asarray(self.raw[(m, algo, metric)])
                    yield {
                        "m": m,
                        "algorithm": algo,
                        "metric": metric,
                        "normalized_mean": float(norm.mean()),
                        "normalized_sd": float(norm.std(ddof=1)) if norm.size > 1 else 0.0,
                        "raw_mean": float(raw.mean()),
                        "bayes_loss": self.bayes[(m, metric)],
                        "repetitions": int(norm.size),
                    }

    def to_csv(self) -> str:
        cols = ["m", "algorithm", "metric", "normalized_mean", "normalized_sd", "raw_mean", "bayes_loss", "repetitions"]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in self.rows():
            w.writerow([repr(row[c]) if isinstance(row[c], float) else row[c] for c in cols])
        return buf.getvalue()


def label_scaling_experiment(
    m_values=DEFAULT_M_VALUES,
    tau: float = 0.0,
    noise: float = 0.1,
    repetitions: int = 10,
    train_n: int = 50,
    test_n: int = 1000,
    seed: int = 0,
    config: OptimizerConfig = OptimizerConfig(),
) -> ScalingTable:
    """For each label count and repetition, draw fresh boundary coefficients
    and fresh train/test samples, fit BR, CC and NS (identity order) and
    record test Hamming and subset 0/1 losses, raw and Bayes-normalized.
    Noise is applied to both training and test labels.
    """
    if not 0.0 < noise < 0.5:
        raise ValueError("Bayes normalization needs 0 < noise < 0.5")
    table = ScalingTable(tuple(m_values), tau, noise, repetitions, train_n, test_n, seed)
    for m in table.m_values:
        for r in range(repetitions):
            spec_seed, train_seed, test_seed = (derive_seed(seed, m, r, k) for k in range(3))
            spec = make_spec(m, tau, noise, spec_seed)
            train = sample(spec, train_n, train_seed)
            test = sample(spec, test_n, test_seed)
            preds = {
                "BR": predict_br(train_br(train, config), test.features),
                "CC": predict_chain(train_cc(train, None, config), test.features),
                "NS": predict_chain(train_ns(train, None, config), test.features),
            }
            for metric in SCALING_METRICS:
                table.bayes[(m, metric)] = bayes_loss(spec, metric)
            for algo, Yhat in preds.items():
                scores = instance_scores(test.labels, Yhat)
                for metric in SCALING_METRICS:
                    loss = float(np.mean(scores[metric]))
                    table.raw.setdefault((m, algo, metric), []).append(loss)
                    table.normalized.setdefault((m, algo, metric), []).append(
                        loss / table.bayes[(m, metric)]
                    )
    return table
