"""Ensemble fusion and greedy membership selection over screening feature tables."""

from ._drscreen import (
    ConfusionCounts,
    Classifier,
    Error,
    accuracy,
    apply_scenario,
    confusion,
    energy,
    f_score,
    feature_count,
    fuse,
    fuse_positive_score,
    generate_synthetic,
    roc_auc,
    run_experiment,
    search,
    sensitivity,
    specificity,
    stratified_kfold,
    train,
    validate_feature_vector,
)

__all__ = [
    "ConfusionCounts",
    "Classifier",
    "Error",
    "accuracy",
    "apply_scenario",
    "confusion",
    "energy",
    "f_score",
    "feature_count",
    "fuse",
    "fuse_positive_score",
    "generate_synthetic",
    "roc_auc",
    "run_experiment",
    "search",
    "sensitivity",
    "specificity",
    "stratified_kfold",
    "train",
    "validate_feature_vector",
]
