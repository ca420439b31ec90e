"""Multi-label learners built on the logistic base learner."""

from .core import CC, NS, BRModel, ChainModel, Dataset, EnsembleModel, StackingModel, check_order
from .learners import (
    ecc_votes,
    predict,
    predict_br,
    predict_chain,
    predict_ecc,
    predict_stacking,
    train_br,
    train_cc,
    train_ecc,
    train_ns,
    train_stacking,
)
from .serialize import dumps, load_model, loads, save_model
from .subset import LabelSubsetPool, build_subset_pool, subset_correct, subset_correct_batch

__all__ = [
    "CC",
    "NS",
    "BRModel",
    "ChainModel",
    "Dataset",
    "EnsembleModel",
    "LabelSubsetPool",
    "StackingModel",
    "build_subset_pool",
    "check_order",
    "dumps",
    "ecc_votes",
    "load_model",
    "loads",
    "predict",
    "predict_br",
    "predict_chain",
    "predict_ecc",
    "predict_stacking",
    "save_model",
    "subset_correct",
    "subset_correct_batch",
    "train_br",
    "train_cc",
    "train_ecc",
    "train_ns",
    "train_stacking",
]
