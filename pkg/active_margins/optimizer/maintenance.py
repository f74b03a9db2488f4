"""Individualized least maintenance margin ratio."""
from typing import Optional

from ..cpnr import CpnrQuery, cpnr
from ..loans import check_adequacy, initial_margin_ratio
from ..markov import TransitionModel
from .grid import GridConfig


def min_maintenance_ratio(
    model: TransitionModel,
    h: int,
    P0: float,
    Q0: float,
    delta: float,
    r: float,
    T: int,
    grid: GridConfig = GridConfig()
) -> Optional[float]:
    """Return the least grid maintenance ratio keeping the CPNR within alpha.

    The whole W grid is scanned in ascending order, without assuming the
    CPNR to be monotone in w.

    Parameters
    ---------------------
    model: TransitionModel,
        The fitted chain.
    h: int,
        1-based state of P0.
    P0: float,
        Price on the trade date.
    Q0: float,
        Cash collateral of the customer.
    delta: float,
        Stock fraction posted by the customer.
    r: float,
        Daily rate for both the cash and the loan.
    T: int,
        Duration of the loan.
    grid: GridConfig = GridConfig(),
        The W grid and alpha.

    Raises
    ---------------------
    ValueError,
        When Q0 is negative or delta leaves [0, 1].

    Returns
    ---------------------
    The least qualifying w, or None when no grid point qualifies.
    """
    if Q0 < 0 or not 0 <= delta <= 1:
        raise ValueError("Q0 must be non-negative and delta must lie in [0, 1].")
    grid = grid.validate()
    m0 = initial_margin_ratio(Q0, delta, P0)
    for w in grid.W.tolist():
        if not check_adequacy(m0, w):
            continue
        query = CpnrQuery(model=model, h=h, P0=P0, Q0=Q0, delta=delta, w=w, r=r, T=T)
        if cpnr(query).cpnr <= grid.alpha:
            return w
    return None
