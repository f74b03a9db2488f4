"""Deterministic margin ratio arithmetic of a margin loan."""
from typing import Tuple

from .loan_spec import LoanSpec, RATIO_TOLERANCE


def initial_margin_ratio(Q0: float, delta: float, P0: float) -> float:
    """Return the initial margin ratio (Q0 + delta P0) / P0.

    Raises
    ---------------------
    ValueError,
        When P0 is not positive.
    """
    if not P0 > 0:
        raise ValueError("P0 must be positive, got {}.".format(P0))
    return (Q0 + delta * P0) / P0


def check_adequacy(m0: float, w: float, tolerance: float = RATIO_TOLERANCE) -> bool:
    """Return whether the initial margin m0 is adequate for maintenance ratio w.

    Ratios are compared up to `tolerance` to absorb decimal rounding, so
    that m0 = 0.57 is adequate for w = 1.57.
    """
    return m0 + 1 >= w - tolerance


def margins_at(
    spec: LoanSpec,
    w: float,
    i: int,
    Pi: float,
    cash_value_i: float
) -> Tuple[float, float]:
    """Return the required margin and the remaining margin on day i.

    Parameters
    ---------------------
    spec: LoanSpec,
        The loan.
    w: float,
        The maintenance margin ratio.
    i: int,
        The trading day, between 0 and T.
    Pi: float,
        The price on day i.
    cash_value_i: float,
        The day-i value of all the cash deposited so far.

    Raises
    ---------------------
    ValueError,
        When the day is outside the loan.

    Returns
    ---------------------
    Tuple with Sigma_i and L_i.
    """
    if not 0 <= i <= spec.T:
        raise ValueError("Day {} is outside the loan duration {}.".format(i, spec.T))
    sigma = w * spec.P0 * (1 + spec.R) ** i - (1 + spec.delta) * Pi
    return sigma, cash_value_i - sigma


def maintenance_ratio(spec: LoanSpec, i: int, Pi: float, cash_value_i: float) -> float:
    """Return the collateral value over the loan value on day i."""
    return (cash_value_i + (1 + spec.delta) * Pi) / (spec.P0 * (1 + spec.R) ** i)


def stock_proportion(Q0: float, delta: float, P0: float) -> float:
    """Return the share of stock in the initial margin, delta P0 / (delta P0 + Q0).

    Raises
    ---------------------
    ValueError,
        When the initial margin is zero.
    """
    total = delta * P0 + Q0
    if not total > 0:
        raise ValueError("The initial margin must be positive to split it.")
    return delta * P0 / total
