from .features import FEATURES, TARGETS, build_feature_table, feature_row, initial_chaos, transition_feature_table
from .outcome import (
    METRIC_NAMES, MetricsReport, UndefinedMetric, auc_agree_all, auc_agree_major, auc_smooth, auc_strict,
    compute_report, initial_majority, instance_metrics, majority_prediction, smooth_accuracy, strict_accuracy,
)
from .regression import RankDeficientError, RegressionFit, fit_dropping_dependent, fit_linear, significance_stars
from .states import (
    END_STATES, START_STATES, TRANSITIONS, agent_transition_counts, classify_position, correction_rates,
    is_chaos, transition_counts, transition_events,
)

__all__ = [
    "END_STATES", "FEATURES", "METRIC_NAMES", "MetricsReport", "RankDeficientError", "RegressionFit",
    "START_STATES", "TARGETS", "TRANSITIONS", "UndefinedMetric", "agent_transition_counts", "auc_agree_all",
    "auc_agree_major", "auc_smooth", "auc_strict", "build_feature_table", "classify_position", "compute_report",
    "correction_rates", "feature_row", "fit_dropping_dependent", "fit_linear", "initial_chaos",
    "initial_majority", "instance_metrics", "is_chaos", "majority_prediction", "significance_stars",
    "smooth_accuracy", "strict_accuracy", "transition_counts", "transition_events", "transition_feature_table",
]
