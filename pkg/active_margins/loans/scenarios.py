"""Simulation of a margin loan along a realized price path."""
import logging
from typing import List, NamedTuple, Optional, Sequence

import numpy as np

from .loan_spec import LoanOutcome, LoanSpec, MarginSystem
from .ratios import margins_at

logger = logging.getLogger(__name__)


class DefaultScenario(NamedTuple):
    """Loan outcome when the customer defaults at the first call."""
    tau: Optional[int]
    tau_star: Optional[int]
    default_return: float
    negative: bool


class TopupScenario(NamedTuple):
    """Loan outcome when the customer meets every call with a top-up."""
    calls: List[bool]
    topups: List[float]
    cost: float

    @property
    def n_calls(self) -> int:
        """Return the number of days with a call."""
        return sum(self.calls)


def _check_path(spec: LoanSpec, path: Sequence[float]) -> np.ndarray:
    path = np.asarray(path, dtype=float)
    if path.shape != (spec.T,):
        raise ValueError(
            "The path must hold exactly T={} prices, got {}.".format(spec.T, path.size)
        )
    return path


def liquidation_return(spec: LoanSpec, day: int, price: float) -> float:
    """Return the broker return when liquidating on the given day at the given price."""
    return (
        spec.Q0 * (1 + spec.r) ** day
        + (1 + spec.delta) * price
        - spec.P0 * (1 + spec.R) ** day
    )


def simulate_default_scenario(
    spec: LoanSpec,
    w: float,
    path: Sequence[float]
) -> DefaultScenario:
    """Return the outcome of a customer defaulting on the first margin call.

    The first call is issued on the first day with non-positive remaining
    margin, and the collateral is liquidated the next trading day, or at
    maturity when the call falls on the last day.

    Parameters
    ---------------------
    spec: LoanSpec,
        The loan.
    w: float,
        The maintenance margin ratio.
    path: Sequence[float],
        The prices P_1..P_T.

    Raises
    ---------------------
    ValueError,
        When the path length differs from T.
    """
    path = _check_path(spec.validate(), path)
    for day, price in enumerate(path, start=1):
        _, remaining = margins_at(spec, w, day, price, spec.Q0 * (1 + spec.r) ** day)
        if remaining <= 0:
            tau_star = min(day + 1, spec.T)
            default_return = liquidation_return(spec, tau_star, path[tau_star - 1])
            return DefaultScenario(
                tau=day,
                tau_star=tau_star,
                default_return=default_return,
                negative=default_return < 0
            )
    return DefaultScenario(
        tau=None,
        tau_star=None,
        default_return=liquidation_return(spec, spec.T, path[-1]),
        negative=False
    )


def simulate_topup_scenario(
    spec: LoanSpec,
    system: MarginSystem,
    path: Sequence[float]
) -> TopupScenario:
    """Return the outcome of a customer meeting every call with cash.

    On a call day the customer deposits, at that day's close, the cash
    bringing the maintenance ratio back to the system's top-up target.
    Further calls may follow on later days.

    Parameters
    ---------------------
    spec: LoanSpec,
        The loan.
    system: MarginSystem,
        The margin system providing w and the top-up target.
    path: Sequence[float],
        The prices P_1..P_T.

    Raises
    ---------------------
    ValueError,
        When the path length differs from T.

    Returns
    ---------------------
    The per-day calls and top-ups, and the terminal value of the initial
    margin plus all top-ups, the stock leg marked at P_T.
    """
    path = _check_path(spec.validate(), path)
    cash = spec.Q0
    calls, topups = [], []
    for day, price in enumerate(path, start=1):
        cash *= 1 + spec.r
        _, remaining = margins_at(spec, system.w, day, price, cash)
        topup = 0.0
        if remaining <= 0:
            topup = (
                system.topup_target * spec.P0 * (1 + spec.R) ** day
                - (cash + (1 + spec.delta) * price)
            )
            if topup < 0:
                logger.warning(
                    "Negative top-up %s on day %s clamped to zero.", topup, day
                )
                topup = 0.0
            cash += topup
        calls.append(remaining <= 0)
        topups.append(topup)
    return TopupScenario(
        calls=calls,
        topups=topups,
        cost=cash + spec.delta * path[-1]
    )


def simulate_loan(
    spec: LoanSpec,
    system: MarginSystem,
    path: Sequence[float]
) -> LoanOutcome:
    """Return both the default and the top-up outcomes of the loan."""
    default = simulate_default_scenario(spec, system.w, path)
    topup = simulate_topup_scenario(spec, system, path)
    return LoanOutcome(
        tau=default.tau,
        tau_star=default.tau_star,
        default_return=float(default.default_return),
        negative=bool(default.negative),
        n_calls=int(topup.n_calls),
        cost=float(topup.cost)
    )
