"""Sub-module computing the conditional probability of negative return."""
from .query import CpnrQuery, CpnrResult, DayProbabilities, conditional_ratio
from .thresholds import (call_threshold, loss_threshold, call_thresholds,
                         loss_thresholds, growth_factors, count_below)
from .recursion import (prob_margin_call, prob_joint_negative, cpnr,
                        evaluate_thresholds, query_thresholds, build_result)
from .exact import exact_first_passage
from .oracle import cpnr_oracle

__all__ = [
    "CpnrQuery",
    "CpnrResult",
    "DayProbabilities",
    "conditional_ratio",
    "call_threshold",
    "loss_threshold",
    "call_thresholds",
    "loss_thresholds",
    "growth_factors",
    "count_below",
    "prob_margin_call",
    "prob_joint_negative",
    "cpnr",
    "evaluate_thresholds",
    "query_thresholds",
    "build_result",
    "exact_first_passage",
    "cpnr_oracle"
]
