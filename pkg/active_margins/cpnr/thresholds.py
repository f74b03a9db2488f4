"""State-level call and loss thresholds of a loan."""
from typing import List

import numpy as np

from ..markov import StateSpace


def growth_factors(r: float, T: int) -> np.ndarray:
    """Return (1 + r)^m for m = 1..T."""
    return np.array([(1.0 + r) ** m for m in range(1, T + 1)])


def count_below(space: StateSpace, delta: float, bounds: np.ndarray) -> np.ndarray:
    """Return, for each bound, the largest k with (1 + delta) q_k < bound, 0 if none."""
    return np.searchsorted((1 + delta) * space.reps, bounds, side="left")


def call_threshold(
    space: StateSpace,
    P0: float,
    Q0: float,
    delta: float,
    w: float,
    r: float,
    m: int
) -> int:
    """Return the largest state k with (1 + delta) q_k < (w P0 - Q0)(1 + r)^m.

    Returns 0 when no state qualifies.
    """
    if m < 1:
        raise ValueError("The day must be at least 1, got {}.".format(m))
    return int(call_thresholds(space, P0, Q0, delta, w, r, m)[-1])


def loss_threshold(
    space: StateSpace,
    P0: float,
    Q0: float,
    delta: float,
    r: float,
    t: int
) -> int:
    """Return the largest state k with (1 + delta) q_k < (P0 - Q0)(1 + r)^t.

    Returns 0 when no state qualifies.
    """
    if t < 1:
        raise ValueError("The day must be at least 1, got {}.".format(t))
    return int(loss_thresholds(space, P0, Q0, delta, r, t)[-1])


def call_thresholds(
    space: StateSpace,
    P0: float,
    Q0: float,
    delta: float,
    w: float,
    r: float,
    T: int
) -> np.ndarray:
    """Return the call thresholds k_1..k_T."""
    return count_below(space, delta, (w * P0 - Q0) * growth_factors(r, T))


def loss_thresholds(
    space: StateSpace,
    P0: float,
    Q0: float,
    delta: float,
    r: float,
    T: int
) -> np.ndarray:
    """Return the loss thresholds a_1..a_T."""
    return count_below(space, delta, (P0 - Q0) * growth_factors(r, T))


def as_list(thresholds: np.ndarray) -> List[int]:
    """Return the thresholds as plain integers."""
    return [int(value) for value in thresholds]
