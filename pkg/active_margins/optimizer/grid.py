"""Grids of initial margin ratios, stock fractions and maintenance ratios."""
from typing import NamedTuple

import numpy as np


class GridConfig(NamedTuple):
    """Uniform grids M, D and W with the CPNR bound alpha.

    Bounds are given as ratios and must be integer multiples of `step`.
    Internally every grid point is handled as an integer number of steps,
    so that feasibility checks and least squares ties are exact.

    Members
    ---------------------
    m_min: float = 0.0,
        Smallest initial margin ratio.
    m_max: float = 0.80,
        Largest initial margin ratio.
    delta_min: float = 0.0,
        Smallest stock fraction.
    delta_max: float = 0.80,
        Largest stock fraction.
    w_min: float = 1.00,
        Smallest maintenance ratio.
    w_max: float = 2.00,
        Largest maintenance ratio.
    step: float = 0.01,
        Spacing of every grid.
    alpha: float = 0.05,
        Bound on the conditional probability of negative return.
    """
    m_min: float = 0.0
    m_max: float = 0.80
    delta_min: float = 0.0
    delta_max: float = 0.80
    w_min: float = 1.00
    w_max: float = 2.00
    step: float = 0.01
    alpha: float = 0.05

    def _units(self, value: float) -> int:
        units = int(round(value / self.step))
        if not np.isclose(units * self.step, value, rtol=0, atol=1e-9):
            raise ValueError(
                "The grid bound {} is not a multiple of the step {}.".format(value, self.step)
            )
        return units

    def validate(self) -> "GridConfig":
        """Return the grid itself after checking its bounds.

        Raises
        ---------------------
        ValueError,
            When a bound is not a multiple of the step, a range is empty,
            the stock fraction leaves [0, 1] or alpha leaves [0, 1].
        """
        if not self.step > 0:
            raise ValueError("The step must be positive, got {}.".format(self.step))
        self._units(1.0)
        for low, high, name in (
            (self.m_min, self.m_max, "m"),
            (self.delta_min, self.delta_max, "delta"),
            (self.w_min, self.w_max, "w")
        ):
            if self._units(low) > self._units(high):
                raise ValueError("The {} grid [{}, {}] is empty.".format(name, low, high))
        if self.m_min < 0 or self.delta_min < 0 or self.delta_max > 1:
            raise ValueError("m must be non-negative and delta must lie in [0, 1].")
        if not 0 <= self.alpha <= 1:
            raise ValueError("alpha must lie in [0, 1], got {}.".format(self.alpha))
        return self

    @property
    def one(self) -> int:
        """Return the number of steps in a unit ratio."""
        return self._units(1.0)

    def _axis_units(self, low: float, high: float) -> np.ndarray:
        return np.arange(self._units(low), self._units(high) + 1)

    @property
    def m_units(self) -> np.ndarray:
        """Return the initial margin grid in steps."""
        return self._axis_units(self.m_min, self.m_max)

    @property
    def delta_units(self) -> np.ndarray:
        """Return the stock fraction grid in steps."""
        return self._axis_units(self.delta_min, self.delta_max)

    @property
    def w_units(self) -> np.ndarray:
        """Return the maintenance ratio grid in steps."""
        return self._axis_units(self.w_min, self.w_max)

    def to_ratio(self, units: np.ndarray) -> np.ndarray:
        """Return grid points given in steps as ratios rounded to 10 decimals."""
        return np.round(np.asarray(units) * self.step, 10)

    @property
    def M(self) -> np.ndarray:
        """Return the initial margin ratios."""
        return self.to_ratio(self.m_units)

    @property
    def D(self) -> np.ndarray:
        """Return the stock fractions."""
        return self.to_ratio(self.delta_units)

    @property
    def W(self) -> np.ndarray:
        """Return the maintenance ratios."""
        return self.to_ratio(self.w_units)
