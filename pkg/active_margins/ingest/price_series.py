"""Class implementing a validated series of daily closing prices."""
from typing import Iterable, Tuple

import numpy as np
import pandas as pd

# Prices are compared exactly once rounded to this many decimals.
PRICE_DECIMALS = 6


class PriceSeriesError(ValueError):
    """Raised when a price file or series violates the series invariants.

    Members
    ---------------------
    path: str,
        The offending file, when known.
    row: int,
        The 1-based data row (header excluded), when known.
    """

    def __init__(self, message: str, path: str = None, row: int = None):
        """Create new PriceSeriesError.

        Parameters
        ---------------------
        message: str,
            Description of the violation.
        path: str = None,
            The offending file, when known.
        row: int = None,
            The 1-based data row, when known.
        """
        prefix = "" if path is None else "{}: ".format(path)
        location = "" if row is None else "row {}: ".format(row)
        super().__init__("{}{}{}".format(prefix, location, message))
        self.path = path
        self.row = row


class PriceSeries:
    """Ordered daily closing prices of a single symbol.

    Dates are strictly increasing and every close is positive. The arrays
    exposed by the properties are read-only views.

    Private members
    -----------------------
    _symbol: str,
        Identifier of the stock.
    _dates: np.ndarray,
        Trading days as datetime64[D].
    _closes: np.ndarray,
        Closing prices rounded to PRICE_DECIMALS.
    """

    def __init__(
        self,
        symbol: str,
        dates: Iterable,
        closes: Iterable[float]
    ):
        """Create new PriceSeries object.

        Parameters
        -----------------------
        symbol: str,
            Identifier of the stock.
        dates: Iterable,
            Trading days, anything accepted by numpy as datetime64[D].
        closes: Iterable[float],
            Positive closing prices, one per date.

        Raises
        -----------------------
        PriceSeriesError,
            When the lengths differ, the dates are not strictly increasing
            or a close is not positive.
        """
        dates = np.array(dates, dtype="datetime64[D]")
        closes = np.round(np.array(closes, dtype=float), PRICE_DECIMALS)
        if dates.shape != closes.shape or dates.ndim != 1:
            raise PriceSeriesError(
                "Dates and closes must be one dimensional and of equal length."
            )
        not_positive = np.flatnonzero(~(closes > 0))
        if not_positive.size:
            raise PriceSeriesError(
                "close must be positive, found {}.".format(closes[not_positive[0]]),
                row=int(not_positive[0]) + 1
            )
        not_increasing = np.flatnonzero(np.diff(dates) <= np.timedelta64(0, "D"))
        if not_increasing.size:
            raise PriceSeriesError(
                "dates must be strictly increasing, found {} after {}.".format(
                    dates[not_increasing[0] + 1],
                    dates[not_increasing[0]]
                ),
                row=int(not_increasing[0]) + 2
            )
        dates.setflags(write=False)
        closes.setflags(write=False)
        self._symbol = symbol
        self._dates = dates
        self._closes = closes

    @property
    def symbol(self) -> str:
        """Return the identifier of the stock."""
        return self._symbol

    @property
    def dates(self) -> np.ndarray:
        """Return the trading days."""
        return self._dates

    @property
    def closes(self) -> np.ndarray:
        """Return the closing prices."""
        return self._closes

    @property
    def observations(self) -> Tuple[Tuple[np.datetime64, float], ...]:
        """Return the (date, close) pairs."""
        return tuple(zip(self._dates, self._closes.tolist()))

    def __len__(self) -> int:
        return len(self._closes)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PriceSeries)
            and self._symbol == other._symbol
            and np.array_equal(self._dates, other._dates)
            and np.array_equal(self._closes, other._closes)
        )

    def __repr__(self) -> str:
        return "PriceSeries(symbol={!r}, length={})".format(self._symbol, len(self))

    def to_frame(self) -> pd.DataFrame:
        """Return the series as a `date,close` DataFrame."""
        return pd.DataFrame({
            "date": pd.to_datetime(self._dates).strftime("%Y-%m-%d"),
            "close": self._closes
        })

    def window(self, start: int, stop: int) -> np.ndarray:
        """Return the closes of the trading days in [start, stop)."""
        if start < 0 or stop > len(self) or start >= stop:
            raise ValueError(
                "Window [{}, {}) is not inside a series of length {}.".format(
                    start, stop, len(self)
                )
            )
        return self._closes[start:stop]
