"""Stacked conformal prediction for regression.

Cross-fitted base learners feed a least-squares meta-learner whose full
conformal prediction intervals are computed with rank-one inverse updates.
"""

__version__ = "0.1.0"

from .baseline import SplitConformal, split_conformal_baseline
from .conformal import (
    ConformalConfig,
    MetaState,
    PredictionInterval,
    ScorePair,
    brute_force_interval,
    conformal_rank,
    conformity_scores,
    fit_meta,
    full_cp_interval,
    full_cp_intervals,
)
from .evaluation import EvaluationReport, evaluate, interval_records, render_report
from .folding import FoldScheme, exclusion_indices, fold_of, sample_fold_scheme
from .learners import ForestSpec, KNNSpec, RidgeSpec, fit, parse_learner, predict, symmetric_hash
from .linalg import gram_inverse, matmul, matvec, rank_one_inverse_update
from .probe import StabilityReport, stability_probe
from .stack import Dataset, SecondLevelData, StackModel, cross_fit, fit_full, predict_features
from .synthetic import SyntheticSpec, generate

__all__ = [
    "ConformalConfig",
    "Dataset",
    "EvaluationReport",
    "FoldScheme",
    "ForestSpec",
    "KNNSpec",
    "MetaState",
    "PredictionInterval",
    "RidgeSpec",
    "ScorePair",
    "SecondLevelData",
    "SplitConformal",
    "StabilityReport",
    "StackModel",
    "SyntheticSpec",
    "brute_force_interval",
    "conformal_rank",
    "conformity_scores",
    "cross_fit",
    "evaluate",
    "exclusion_indices",
    "fit",
    "fit_full",
    "fit_meta",
    "fold_of",
    "full_cp_interval",
    "full_cp_intervals",
    "generate",
    "gram_inverse",
    "interval_records",
    "matmul",
    "matvec",
    "parse_learner",
    "predict",
    "predict_features",
    "rank_one_inverse_update",
    "render_report",
    "sample_fold_scheme",
    "split_conformal_baseline",
    "stability_probe",
    "symmetric_hash",
]
