"""Enumeration of the indifference set and least squares selection."""
import logging
from typing import Dict, NamedTuple, Tuple

import numpy as np
import pandas as pd
from tqdm.auto import tqdm

from ..cpnr import build_result, count_below, evaluate_thresholds, growth_factors
from ..loans import MarginSystem, provenances
from ..markov import TransitionModel
from .grid import GridConfig

logger = logging.getLogger(__name__)


class EnumerationContext(NamedTuple):
    """The loan context an indifference set was enumerated in."""
    model: TransitionModel
    h: int
    P0: float
    r: float
    T: int


class IndifferenceSet:
    """Grid margin systems with adequate initial margin and CPNR within alpha.

    Elements are stored in lexicographic (m, delta, w) order, as integer
    numbers of grid steps plus their CPNR.

    Private members
    ---------------------
    _grid: GridConfig,
        The grid the elements were drawn from.
    _units: np.ndarray,
        Array of shape (q, 3) with the m, delta and w steps.
    _cpnr: np.ndarray,
        The CPNR of each element.
    _context: EnumerationContext,
        The model, state, price, rate and duration of the loan.
    """

    def __init__(
        self,
        grid: GridConfig,
        units: np.ndarray,
        cpnr: np.ndarray,
        context: EnumerationContext
    ):
        """Create new IndifferenceSet object.

        Parameters
        ---------------------
        grid: GridConfig,
            The grid the elements were drawn from.
        units: np.ndarray,
            Array of shape (q, 3) with the m, delta and w steps.
        cpnr: np.ndarray,
            The CPNR of each element.
        context: EnumerationContext,
            The loan context of the enumeration.
        """
        units = np.asarray(units, dtype=np.int64).reshape(-1, 3)
        order = np.lexsort((units[:, 2], units[:, 1], units[:, 0]))
        self._grid = grid
        self._units = units[order]
        self._cpnr = np.asarray(cpnr, dtype=float)[order]
        self._context = context

    @property
    def grid(self) -> GridConfig:
        """Return the grid of the set."""
        return self._grid

    @property
    def context(self) -> EnumerationContext:
        """Return the loan context of the set."""
        return self._context

    @property
    def units(self) -> np.ndarray:
        """Return the (m, delta, w) elements in grid steps."""
        return self._units.copy()

    @property
    def cpnr(self) -> np.ndarray:
        """Return the CPNR of each element."""
        return self._cpnr.copy()

    @property
    def elements(self) -> np.ndarray:
        """Return the (m, delta, w) elements as ratios."""
        return self._grid.to_ratio(self._units)

    def __len__(self) -> int:
        return len(self._units)

    def to_frame(self) -> pd.DataFrame:
        """Return the elements as a DataFrame with columns m, delta, w, cpnr."""
        elements = self.elements
        return pd.DataFrame({
            "m": elements[:, 0],
            "delta": elements[:, 1],
            "w": elements[:, 2],
            "cpnr": self._cpnr
        })


def _feasible_pairs(grid: GridConfig, delta_units: int) -> Tuple[np.ndarray, np.ndarray]:
    """Return the (m, w) steps with m >= delta and 1 + m >= w, m-major."""
    m_units = grid.m_units[grid.m_units >= delta_units]
    m_grid, w_grid = np.meshgrid(m_units, grid.w_units, indexing="ij")
    feasible = grid.one + m_grid >= w_grid
    return m_grid[feasible], w_grid[feasible]


def enumerate_indifference_set(
    model: TransitionModel,
    h: int,
    P0: float,
    r: float,
    T: int,
    grid: GridConfig = GridConfig(),
    memo: Dict = None,
    verbose: bool = False
) -> IndifferenceSet:
    """Return the indifference set of the loan over the grid.

    Every triple with m >= delta and 1 + m >= w is evaluated with cash
    collateral Q0 = (m - delta) P0 and kept when its CPNR is at most alpha.
    Since the CPNR only depends on the call and loss threshold sequences,
    evaluations are memoized on the exact sequences.

    Parameters
    ---------------------
    model: TransitionModel,
        The fitted chain.
    h: int,
        1-based state of P0.
    P0: float,
        Price on the trade date.
    r: float,
        Daily rate for both the cash and the loan.
    T: int,
        Duration of the loan in trading days.
    grid: GridConfig = GridConfig(),
        The grids and alpha.
    memo: Dict = None,
        Cache from threshold sequences to CPNR, shared between calls on
        the same model, state and duration.
    verbose: bool = False,
        Wether to show the loading bar.
    """
    grid = grid.validate()
    if not 1 <= h <= model.n:
        raise ValueError("h must lie in [1, {}], got {}.".format(model.n, h))
    if memo is None:
        memo = {}
    growth = growth_factors(r, T)
    space = model.state_space
    kept_units, kept_cpnr = [], []
    for delta_units in tqdm(
        grid.delta_units,
        desc="Enumerating margin systems",
        disable=not verbose,
        leave=False
    ):
        m_units, w_units = _feasible_pairs(grid, delta_units)
        if m_units.size == 0:
            continue
        delta = float(grid.to_ratio(delta_units))
        m, w = grid.to_ratio(m_units), grid.to_ratio(w_units)
        Q0 = (m - delta) * P0
        k = count_below(space, delta, (w * P0 - Q0)[:, None] * growth[None, :])
        a = count_below(space, delta, (P0 - Q0)[:, None] * growth[None, :])
        sequences, inverse = np.unique(
            np.concatenate([k, a], axis=1),
            axis=0,
            return_inverse=True
        )
        values = np.empty(len(sequences))
        for index, sequence in enumerate(sequences):
            key = tuple(sequence.tolist())
            if key not in memo:
                calls, negatives = evaluate_thresholds(model, h, sequence[:T], sequence[T:])
                memo[key] = build_result(sequence[:T], sequence[T:], calls, negatives).cpnr
            values[index] = memo[key]
        values = values[np.asarray(inverse).reshape(-1)]
        kept = values <= grid.alpha
        kept_units.append(np.column_stack([
            m_units[kept],
            np.full(kept.sum(), delta_units),
            w_units[kept]
        ]))
        kept_cpnr.append(values[kept])
    logger.debug("Evaluated %d distinct threshold sequences.", len(memo))
    return IndifferenceSet(
        grid,
        np.concatenate(kept_units) if kept_units else np.empty((0, 3)),
        np.concatenate(kept_cpnr) if kept_cpnr else np.empty(0),
        EnumerationContext(model=model, h=h, P0=P0, r=r, T=T)
    )


def select_optimal(indifference_set: IndifferenceSet) -> MarginSystem:
    """Return the member minimizing the sum of squared distances to all members.

    The objective is evaluated exactly in grid steps; ties are broken by
    the smallest m, then delta, then w. The top-up target of the returned
    system equals its maintenance ratio.

    Raises
    ---------------------
    ValueError,
        When the set is empty.
    """
    if len(indifference_set) == 0:
        raise ValueError("Cannot select a margin system from an empty indifference set.")
    units = indifference_set.units
    # sum_i |x_i - x|^2 = q |x|^2 - 2 x . sum_i x_i + const
    objective = (
        len(units) * (units ** 2).sum(axis=1)
        - 2 * units @ units.sum(axis=0)
    )
    best = int(np.flatnonzero(objective == objective.min())[0])
    m, delta, w = indifference_set.elements[best].tolist()
    return MarginSystem(
        m=m,
        delta=delta,
        w=w,
        topup_target=w,
        provenance=provenances.deduced
    )
