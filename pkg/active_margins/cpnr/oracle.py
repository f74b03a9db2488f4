"""Naive nested-loop evaluation of the CPNR recursion, used to cross-check it.

Nothing here is shared with the vectorized path: matrix powers, threshold
scans and sums are written out as plain loops over lists.
"""
from typing import List

from .query import CpnrQuery, CpnrResult, DayProbabilities

MAXIMUM_STATES = 64
MAXIMUM_DAYS = 30


def _multiply(left: List[List[float]], right: List[List[float]]) -> List[List[float]]:
    size = len(left)
    return [
        [
            sum(left[i][l] * right[l][j] for l in range(size))
            for j in range(size)
        ]
        for i in range(size)
    ]


def _scan(reps: List[float], delta: float, bound: float) -> int:
    largest = 0
    for index, rep in enumerate(reps, start=1):
        if (1 + delta) * rep < bound:
            largest = index
    return largest


def cpnr_oracle(q: CpnrQuery) -> CpnrResult:
    """Return the CPNR of the query computed by direct nested loops.

    Raises
    ---------------------
    ValueError,
        When the chain has more than 64 states or the loan lasts more
        than 30 days.
    """
    q = q.validate()
    reps = [float(rep) for rep in q.model.state_space.reps]
    n, T, h = len(reps), q.T, q.h - 1
    if n > MAXIMUM_STATES or T > MAXIMUM_DAYS:
        raise ValueError(
            "The oracle handles at most {} states and {} days, got {} and {}.".format(
                MAXIMUM_STATES, MAXIMUM_DAYS, n, T
            )
        )
    one = [[float(value) for value in row] for row in q.model.one_step]
    powers = {1: one}
    for step in range(2, T + 1):
        powers[step] = _multiply(powers[step - 1], one)

    k = [_scan(reps, q.delta, (q.w * q.P0 - q.Q0) * (1.0 + q.r) ** m) for m in range(1, T + 1)]
    a = [_scan(reps, q.delta, (q.P0 - q.Q0) * (1.0 + q.r) ** t) for t in range(1, T + 1)]

    calls = [0.0] * T
    survival = 1.0
    for m in range(1, T + 1):
        if m == 1:
            conditional = sum(one[h][i] for i in range(k[0]))
        else:
            denominator = sum(powers[m - 1][h][i] for i in range(k[m - 2], n))
            if denominator <= 0:
                break
            numerator = 0.0
            for i in range(k[m - 2], n):
                for j in range(k[m - 1]):
                    numerator += powers[m - 1][h][i] * one[i][j]
            conditional = numerator / denominator
        if k[m - 1] == n:
            conditional = 1.0
        calls[m - 1] = survival * conditional
        survival = survival * (1.0 - conditional)
        if survival == 0:
            break

    negatives = [0.0] * T
    for t in range(1, T + 1):
        if k[t - 1] == 0 or a[t - 1] == 0:
            continue
        denominator = sum(powers[t][h][j] for j in range(k[t - 1]))
        if denominator <= 0:
            continue
        if t < T:
            numerator = 0.0
            for j in range(k[t - 1]):
                for l in range(a[t - 1]):
                    numerator += powers[t][h][j] * one[j][l]
        else:
            numerator = sum(powers[T][h][j] for j in range(min(a[T - 1], k[T - 1])))
        negatives[t - 1] = calls[t - 1] * min(numerator / denominator, 1.0)

    prob_C, prob_NC = sum(calls), sum(negatives)
    return CpnrResult(
        prob_C=prob_C,
        prob_NC=prob_NC,
        cpnr=prob_NC / prob_C if prob_C > 0 else 0.0,
        per_day=[
            DayProbabilities(t=t, prob_C=calls[t - 1], prob_NC=negatives[t - 1])
            for t in range(1, T + 1)
        ],
        k=k,
        a=a
    )
