"""Check whether a series is long enough for the out-of-sample protocol."""
from typing import NamedTuple

from .price_series import PriceSeries


class WindowSufficiency(NamedTuple):
    """Verdict of a window sufficiency check."""
    sufficient: bool
    required: int
    available: int


def check_window_sufficiency(
    series: PriceSeries,
    history: int,
    horizon: int,
    n_loans: int
) -> WindowSufficiency:
    """Return whether the series can host the requested loans.

    Parameters
    -----------------------
    series: PriceSeries,
        The series to check.
    history: int,
        Number of closes used to fit each model.
    horizon: int,
        Duration of each loan in trading days.
    n_loans: int,
        Number of consecutive loans.

    Raises
    -----------------------
    ValueError,
        When a count is smaller than one.
    """
    for name, value in (("history", history), ("horizon", horizon), ("n_loans", n_loans)):
        if value < 1:
            raise ValueError("{} must be at least 1, got {}.".format(name, value))
    required = history + horizon + n_loans
    return WindowSufficiency(
        sufficient=len(series) >= required,
        required=required,
        available=len(series)
    )
