"""Exact first-passage probabilities, for comparison with the recursion.

Unlike the recursion, the survival mass is carried state by state with
the call states removed every day, and the liquidation price of a call
on day t < T is tested against the loss threshold of day t + 1.
"""
import numpy as np

from .query import CpnrQuery, CpnrResult
from .recursion import build_result, query_thresholds


def exact_first_passage(q: CpnrQuery) -> CpnrResult:
    """Return the exact first-passage Prob(C), Prob(NC) and CPNR of the query."""
    k, a = query_thresholds(q.validate())
    one_step = q.model.one_step
    cumulative = np.cumsum(one_step, axis=1)
    survival = np.zeros(q.model.n)
    survival[q.h - 1] = 1.0
    calls, negatives = np.zeros(q.T), np.zeros(q.T)
    for t in range(1, q.T + 1):
        mass = survival @ one_step
        threshold = k[t - 1]
        calls[t - 1] = mass[:threshold].sum()
        if t < q.T:
            losses = a[t]
            if threshold and losses:
                negatives[t - 1] = mass[:threshold] @ cumulative[:threshold, losses - 1]
        else:
            negatives[t - 1] = mass[:min(threshold, a[t - 1])].sum()
        survival = mass
        survival[:threshold] = 0.0
    return build_result(k, a, calls, negatives)
