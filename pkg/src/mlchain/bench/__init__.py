"""Experiment harness: cross-validation, significance tests, error-propagation studies, CLI."""

from .experiments import PositionCurve, ScalingTable, chain_position_experiment, label_scaling_experiment
from .harness import AlgorithmSpec, MetricsReport, derive_seed, run_cv
from .tstats import TTestResult, betainc, paired_ttest, t_sf_two_sided

__all__ = [
    "AlgorithmSpec",
    "MetricsReport",
    "PositionCurve",
    "ScalingTable",
    "TTestResult",
    "betainc",
    "chain_position_experiment",
    "derive_seed",
    "label_scaling_experiment",
    "paired_ttest",
    "run_cv",
    "t_sf_two_sided",
]
