"""Binary relevance, classifier chains, nested stacking, two-level stacking and ECC."""

from __future__ import annotations

import numpy as np

from ..linlearn import BinaryProblem, OptimizerConfig, _check_threshold, train_binary
from .core import (
    CC,
    NS,
    BRModel,
    ChainModel,
    Dataset,
    EnsembleModel,
    StackingModel,
    _as_rows,
    check_order,
)

DEFAULT_CONFIG = OptimizerConfig()


def _unbatch(X, out):
    return out[0] if np.asarray(X).ndim == 1 else out


def train_br(data: Dataset, config: OptimizerConfig = DEFAULT_CONFIG) -> BRModel:
    """One independent classifier per label over the original features."""
    X, Y = data.features, data.labels
    return BRModel([train_binary(BinaryProblem(X, Y[:, j]), config) for j in range(data.m)])


def predict_br(model: BRModel, X, threshold: float = 0.5) -> np.ndarray:
    Xr = _as_rows(X, model.d)
    out = np.column_stack([clf.predict(Xr, threshold) for clf in model.classifiers])
    return _unbatch(X, out.astype(np.int8))


def _fit_chain(data: Dataset, order, config: OptimizerConfig, strategy: str) -> ChainModel:
    order = check_order(range(data.m) if order is None else order, data.m)
    Y = data.labels
    Z = data.features
    classifiers = []
    for pos, label in enumerate(order):
        clf = train_binary(BinaryProblem(Z, Y[:, label]), config)
        classifiers.append(clf)
        if pos == data.m - 1:
            break
        if strategy == CC:
            extra = Y[:, label]
        else:
            # Within-sample: the classifier's own prediction on rows whose
            # earlier augmentations are themselves predictions.
            extra = clf.predict(Z)
        Z = np.hstack([Z, extra[:, None].astype(np.float64)])
    return ChainModel(order, classifiers, strategy)


def train_cc(data: Dataset, order=None, config: OptimizerConfig = DEFAULT_CONFIG) -> ChainModel:
    """Classifier chain trained on the true values of preceding labels.

    ``order[p]`` is the label index placed at chain position ``p``; the
    default is the dataset's column order.
    """
    return _fit_chain(data, order, config, CC)


def train_ns(data: Dataset, order=None, config: OptimizerConfig = DEFAULT_CONFIG) -> ChainModel:
    """Nested stacking: like :func:`train_cc`, but each classifier is trained on
    the within-sample predictions of its predecessors instead of the true labels.
    """
    return _fit_chain(data, order, config, NS)


def predict_chain(model: ChainModel, X, threshold: float = 0.5) -> np.ndarray:
    """Query the chain position by position, feeding each classifier the
    thresholded predictions of its predecessors. Output columns follow the
    original label indexing, not chain order.
    """
    _check_threshold(threshold)
    Z = _as_rows(X, model.d)
    out = np.zeros((Z.shape[0], model.m), dtype=np.int8)
    for pos, (label, clf) in enumerate(zip(model.order, model.classifiers)):
        yhat = clf.predict(Z, threshold)
        out[:, label] = yhat
        if pos < model.m - 1:
            Z = np.hstack([Z, yhat[:, None].astype(np.float64)])
    return _unbatch(X, out)


def train_stacking(
    data: Dataset,
    config: OptimizerConfig = DEFAULT_CONFIG,
    level2_targets: str = "predicted",
) -> StackingModel:
    """Two-level stacking: BR at level 1, then one meta classifier per label
    over the features augmented with all m level-1 outputs.

    ``level2_targets`` selects the training-time augmentation: ``"predicted"``
    (within-sample level-1 predictions) or ``"true"`` (the label matrix).
    """
    if level2_targets not in ("predicted", "true"):
        raise ValueError(f"level2_targets must be 'predicted' or 'true', got {level2_targets!r}")
    level1 = train_br(data, config)
    if level2_targets == "predicted":
        aug = predict_br(level1, data.features)
    else:
        aug = data.labels
    Z = np.hstack([data.features, aug.astype(np.float64)])
    level2 = [train_binary(BinaryProblem(Z, data.labels[:, j]), config) for j in range(data.m)]
    return StackingModel(level1, level2, level2_targets)


def predict_stacking(model: StackingModel, X, threshold: float = 0.5) -> np.ndarray:
    Xr = _as_rows(X, model.d)
    aug = predict_br(model.level1, Xr, threshold)
    Z = np.hstack([Xr, aug.astype(np.float64)])
    out = np.column_stack([clf.predict(Z, threshold) for clf in model.level2])
    return _unbatch(X, out.astype(np.int8))


def train_ecc(
    data: Dataset,
    k: int = 10,
    threshold: float = 0.5,
    config: OptimizerConfig = DEFAULT_CONFIG,
    seed: int = 0,
    orders=None,
    bootstrap: bool = True,
    strategy: str = CC,
) -> EnsembleModel:
    """Ensemble of k chains, each with its own seeded random order and bootstrap sample.

    Member ``i`` draws its order and its n-row bootstrap sample (with
    replacement) from a generator seeded by ``member_seeds[i]``, which in turn
    derive from ``seed``. Explicit ``orders`` override the random ones;
    ``bootstrap=False`` trains every member on the full data.
    """
    if k < 1:
        raise ValueError("ensemble size k must be at least 1")
    if orders is not None and len(orders) != k:
        raise ValueError(f"{len(orders)} orders given for {k} members")
    fit = train_ns if strategy == NS else train_cc
    member_seeds = [int(s) for s in np.random.SeedSequence(seed).generate_state(k)]
    members = []
    for i, mseed in enumerate(member_seeds):
        rng = np.random.default_rng(mseed)
        order = rng.permutation(data.m)
        rows = rng.integers(0, data.n, size=data.n)
        if orders is not None:
            order = orders[i]
        if not bootstrap:
            rows = np.arange(data.n)
        members.append(fit(data.subset(rows), order, config))
    return EnsembleModel(members, threshold, member_seeds)


def ecc_votes(model: EnsembleModel, X) -> np.ndarray:
    """Per-label proportion of members predicting relevance."""
    Xr = _as_rows(X, model.d)
    total = np.zeros((Xr.shape[0], model.m))
    for member in model.members:
        total += predict_chain(member, Xr)
    return total / len(model.members)


def predict_ecc(model: EnsembleModel, X) -> np.ndarray:
    out = (ecc_votes(model, X) >= model.threshold).astype(np.int8)
    return _unbatch(X, out)


def predict(model, X, threshold: float = 0.5) -> np.ndarray:
    """Dispatch to the prediction routine matching ``model``'s type.

    Ensembles use their own stored vote threshold; ``threshold`` applies to
    the other model kinds.
    """
    if isinstance(model, BRModel):
        return predict_br(model, X, threshold)
    if isinstance(model, ChainModel):
        return predict_chain(model, X, threshold)
    if isinstance(model, StackingModel):
        return predict_stacking(model, X, threshold)
    if isinstance(model, EnsembleModel):
        return predict_ecc(model, X)
    raise TypeError(f"not a multi-label model: {type(model).__name__}")
