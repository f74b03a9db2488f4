"""Classes choosing the margin system of a loan on its trade date."""
import logging
from typing import Optional

from ..loans import (MarginSystem, initial_margin_ratio, provenances,
                     required_margin_system)
from ..markov import TransitionModel
from .grid import GridConfig
from .indifference_set import (IndifferenceSet, enumerate_indifference_set,
                               select_optimal)
from .maintenance import min_maintenance_ratio

logger = logging.getLogger(__name__)


class MarginSystemSelector:
    """Class implementing an abstract margin system selector.

    A selector looks at the fitted chain, the state and the price on the
    trade date and determines the margin system of the loan.

    Private members
    ---------------------
    _optimal_system: MarginSystem,
        The system chosen by the last call to tune, if any.
    """

    def __init__(self):
        """Create the MarginSystemSelector object."""
        self._optimal_system = None

    def tune(
        self,
        model: TransitionModel,
        h: int,
        P0: float,
        r: float,
        T: int
    ) -> Optional[MarginSystem]:
        """Return the margin system for the loan, None when none qualifies.

        This method must be implemented in the child classes.
        """
        raise NotImplementedError(
            "Method tune must be implemented in child classes."
        )

    @property
    def optimal_system(self) -> MarginSystem:
        """Return the margin system chosen by the last tuning.

        Raises
        ----------------------
        ValueError,
            If the selector has not been tuned yet or no system qualified.
        """
        if self._optimal_system is None:
            raise ValueError("The selector has not been tuned or found no margin system!")
        return self._optimal_system


class RequiredMarginSelector(MarginSystemSelector):
    """Selector returning the static exchange-required system on every date."""

    def __init__(self, system: MarginSystem = None):
        """Create the RequiredMarginSelector object.

        Parameters
        ---------------------
        system: MarginSystem = None,
            The static system.
            By default, 50% initial, 130% maintenance, top-up to 150%.
        """
        super().__init__()
        self._system = required_margin_system() if system is None else system.validate()

    def tune(
        self,
        model: TransitionModel,
        h: int,
        P0: float,
        r: float,
        T: int
    ) -> MarginSystem:
        """Return the static system, whatever the market state."""
        self._optimal_system = self._system
        return self._optimal_system


class DeducedMarginSelector(MarginSystemSelector):
    """Selector choosing the least squares member of the indifference set.

    Private members
    ---------------------
    _grid: GridConfig,
        The grids and alpha.
    _indifference_set: IndifferenceSet,
        The set enumerated by the last tuning.
    _verbose: bool,
        Wether to show the enumeration loading bar.
    """

    def __init__(self, grid: GridConfig = GridConfig(), verbose: bool = False):
        """Create the DeducedMarginSelector object.

        Parameters
        ---------------------
        grid: GridConfig = GridConfig(),
            The grids and alpha.
        verbose: bool = False,
            Wether to show the enumeration loading bar.
        """
        super().__init__()
        self._grid = grid.validate()
        self._indifference_set = None
        self._verbose = verbose

    @property
    def indifference_set(self) -> IndifferenceSet:
        """Return the indifference set of the last tuning.

        Raises
        ----------------------
        ValueError,
            If the selector has not been tuned yet.
        """
        if self._indifference_set is None:
            raise ValueError("The selector has not been tuned!")
        return self._indifference_set

    def tune(
        self,
        model: TransitionModel,
        h: int,
        P0: float,
        r: float,
        T: int
    ) -> Optional[MarginSystem]:
        """Return the deduced system, None when the indifference set is empty."""
        self._indifference_set = enumerate_indifference_set(
            model, h, P0, r, T,
            grid=self._grid,
            verbose=self._verbose
        )
        self._optimal_system = None
        if len(self._indifference_set) == 0:
            logger.info("Empty indifference set at P0=%s (state %s).", P0, h)
            return None
        self._optimal_system = select_optimal(self._indifference_set)
        return self._optimal_system


class IndividualizedMarginSelector(MarginSystemSelector):
    """Selector keeping the customer's collateral and choosing the least w.

    Private members
    ---------------------
    _Q0: float,
        Cash collateral of the customer.
    _delta: float,
        Stock fraction posted by the customer.
    _grid: GridConfig,
        The W grid and alpha.
    """

    def __init__(self, Q0: float, delta: float, grid: GridConfig = GridConfig()):
        """Create the IndividualizedMarginSelector object.

        Parameters
        ---------------------
        Q0: float,
            Cash collateral of the customer.
        delta: float,
            Stock fraction posted by the customer.
        grid: GridConfig = GridConfig(),
            The W grid and alpha.
        """
        super().__init__()
        self._Q0 = Q0
        self._delta = delta
        self._grid = grid.validate()

    def tune(
        self,
        model: TransitionModel,
        h: int,
        P0: float,
        r: float,
        T: int
    ) -> Optional[MarginSystem]:
        """Return the individualized system, None when no w qualifies."""
        w = min_maintenance_ratio(
            model, h, P0, self._Q0, self._delta, r, T, grid=self._grid
        )
        self._optimal_system = None if w is None else MarginSystem(
            m=initial_margin_ratio(self._Q0, self._delta, P0),
            delta=self._delta,
            w=w,
            topup_target=w,
            provenance=provenances.individualized
        )
        return self._optimal_system
