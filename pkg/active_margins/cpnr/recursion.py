"""Recursive computation of the conditional probability of negative return.

The probability of a first call on day t is the product of the daily
survival probabilities up to t - 1 times the probability of a call on day
t given survival on day t - 1, each factor conditioning only on the
previous day. The probability of a call followed by a negative return
appends the probability of a loss given the call.
"""
from typing import List, Sequence, Tuple

import numpy as np

from ..markov import TransitionModel
from .query import CpnrQuery, CpnrResult, DayProbabilities, conditional_ratio
from .thresholds import as_list, call_thresholds, loss_thresholds


def _cumulative_one_step(model: TransitionModel) -> np.ndarray:
    """Return F with F[i, j] = sum of p_il(1) for l <= j (0-based)."""
    return np.cumsum(model.one_step, axis=1)


def daily_call_probabilities(
    model: TransitionModel,
    h: int,
    k: Sequence[int]
) -> np.ndarray:
    """Return Prob(C_t) for t = 1..T given the call thresholds k_1..k_T.

    A call threshold of 0 gives a zero call probability on that day, a
    threshold of n certainly calls. When the survival set of the previous
    day is unreachable, that day and all the later ones contribute 0.

    Parameters
    ---------------------
    model: TransitionModel,
        The price chain.
    h: int,
        1-based state of the price on the trade date.
    k: Sequence[int],
        Call thresholds k_1..k_T.
    """
    n, T = model.n, len(k)
    cumulative = _cumulative_one_step(model)
    probabilities = np.zeros(T)
    survival = 1.0
    for m in range(1, T + 1):
        current = k[m - 1]
        if m == 1:
            conditional = cumulative[h - 1, current - 1] if current > 0 else 0.0
        else:
            previous = k[m - 2]
            row = model.n_step(m - 1)[h - 1, previous:]
            denominator = row.sum()
            if not denominator > 0:
                break
            conditional = (
                row @ cumulative[previous:, current - 1] / denominator
                if current > 0
                else 0.0
            )
        if current == n:
            conditional = 1.0
        probabilities[m - 1] = survival * conditional
        survival *= 1.0 - conditional
        if survival == 0:
            break
    return probabilities


def daily_loss_given_call(
    model: TransitionModel,
    h: int,
    k: Sequence[int],
    a: Sequence[int]
) -> np.ndarray:
    """Return Prob(N | D_t) for t = 1..T given the call and loss thresholds.

    Before maturity the liquidation price is one step after a call state;
    at maturity the call state itself is liquidated. Zero denominators
    give a zero probability.
    """
    T = len(k)
    cumulative = _cumulative_one_step(model)
    probabilities = np.zeros(T)
    for t in range(1, T + 1):
        calls, losses = k[t - 1], a[t - 1]
        if calls == 0 or losses == 0:
            continue
        row = model.n_step(t)[h - 1]
        denominator = row[:calls].sum()
        if not denominator > 0:
            continue
        if t < T:
            numerator = row[:calls] @ cumulative[:calls, losses - 1]
        else:
            numerator = row[:min(losses, calls)].sum()
        probabilities[t - 1] = min(numerator / denominator, 1.0)
    return probabilities


def evaluate_thresholds(
    model: TransitionModel,
    h: int,
    k: Sequence[int],
    a: Sequence[int]
) -> Tuple[np.ndarray, np.ndarray]:
    """Return the per-day Prob(C_t) and Prob(NC_t) for the given thresholds."""
    calls = daily_call_probabilities(model, h, k)
    return calls, calls * daily_loss_given_call(model, h, k, a)


def query_thresholds(q: CpnrQuery) -> Tuple[List[int], List[int]]:
    """Return the call and loss thresholds k_1..k_T and a_1..a_T of the query."""
    space = q.model.state_space
    return (
        as_list(call_thresholds(space, q.P0, q.Q0, q.delta, q.w, q.r, q.T)),
        as_list(loss_thresholds(space, q.P0, q.Q0, q.delta, q.r, q.T))
    )


def prob_margin_call(q: CpnrQuery) -> Tuple[float, List[float]]:
    """Return Prob(C) and the per-day Prob(C_t) of the query."""
    k, _ = query_thresholds(q.validate())
    calls = daily_call_probabilities(q.model, q.h, k)
    return float(calls.sum()), calls.tolist()


def prob_joint_negative(q: CpnrQuery) -> Tuple[float, List[float]]:
    """Return Prob(NC) and the per-day Prob(NC_t) of the query."""
    k, a = query_thresholds(q.validate())
    _, negatives = evaluate_thresholds(q.model, q.h, k, a)
    return float(negatives.sum()), negatives.tolist()


def build_result(
    k: Sequence[int],
    a: Sequence[int],
    calls: Sequence[float],
    negatives: Sequence[float]
) -> CpnrResult:
    """Return the CpnrResult assembling the per-day probabilities."""
    prob_C = float(np.sum(calls))
    prob_NC = float(np.sum(negatives))
    return CpnrResult(
        prob_C=prob_C,
        prob_NC=prob_NC,
        cpnr=conditional_ratio(prob_NC, prob_C),
        per_day=[
            DayProbabilities(t=t, prob_C=float(call), prob_NC=float(negative))
            for t, (call, negative) in enumerate(zip(calls, negatives), start=1)
        ],
        k=list(k),
        a=list(a)
    )


def cpnr(q: CpnrQuery) -> CpnrResult:
    """Return the conditional probability of negative return of the query.

    Parameters
    ---------------------
    q: CpnrQuery,
        The loan and the chain.

    Returns
    ---------------------
    CpnrResult with Prob(C), Prob(NC), their ratio (0 when Prob(C) is 0),
    the per-day terms and the thresholds.
    """
    k, a = query_thresholds(q.validate())
    calls, negatives = evaluate_thresholds(q.model, q.h, k, a)
    return build_result(k, a, calls, negatives)
