"""Methods to load and store price series as `date,close` CSV files."""
import logging
import os
import re
from glob import glob
from typing import Dict

import numpy as np
import pandas as pd

from .price_series import PriceSeries, PriceSeriesError

logger = logging.getLogger(__name__)

COLUMNS = ("date", "close")

BAD_LINE = re.compile(r"Expected \d+ fields in line (\d+)")


def _read_table(path: str) -> pd.DataFrame:
    """Return the raw string table of a price file."""
    if not os.path.isfile(path):
        raise PriceSeriesError("file does not exist.", path=path)
    try:
        table = pd.read_csv(path, dtype=str, encoding="utf-8", skipinitialspace=True)
    except pd.errors.ParserError as exception:
        match = BAD_LINE.search(str(exception))
        if match is None:
            raise PriceSeriesError(
                "file is not a readable CSV ({}).".format(exception),
                path=path
            )
        # Parser lines are 1-based and count the header.
        raise PriceSeriesError(
            "row has more than {} fields.".format(len(COLUMNS)),
            path=path,
            row=int(match.group(1)) - 1
        )
    except (UnicodeDecodeError, pd.errors.EmptyDataError) as exception:
        raise PriceSeriesError(
            "file is not a readable CSV ({}).".format(exception),
            path=path
        )
    if len(table) and not isinstance(table.index, pd.RangeIndex):
        # An extra field on the first row turns the first column into the index.
        raise PriceSeriesError(
            "row has more than {} fields.".format(len(COLUMNS)),
            path=path,
            row=1
        )
    if tuple(column.strip() for column in table.columns) != COLUMNS:
        raise PriceSeriesError(
            "header must be `date,close`, found `{}`.".format(",".join(table.columns)),
            path=path
        )
    table.columns = list(COLUMNS)
    return table


def load_price_series(path: str, symbol: str = None) -> PriceSeries:
    """Return validated price series loaded from the given CSV file.

    Rows out of date order are sorted ascending with a warning, while
    duplicated dates are rejected.

    Parameters
    -----------------------
    path: str,
        Path to a UTF-8 CSV with header `date,close`, ISO dates and
        decimal closes.
    symbol: str = None,
        Identifier of the stock.
        By default, the file name without extension.

    Raises
    -----------------------
    PriceSeriesError,
        When the file is unreadable, a row is malformed, a close is not
        positive or a date is duplicated. The error names the 1-based row.

    Returns
    -----------------------
    The validated PriceSeries.
    """
    if symbol is None:
        symbol = os.path.splitext(os.path.basename(path))[0]
    table = _read_table(path)
    dates = pd.to_datetime(table.date.str.strip(), format="%Y-%m-%d", errors="coerce")
    closes = pd.to_numeric(table.close.str.strip(), errors="coerce")
    for row, (raw, parsed) in enumerate(zip(table.date, dates), start=1):
        if pd.isna(parsed):
            raise PriceSeriesError("malformed date `{}`.".format(raw), path=path, row=row)
    for row, (raw, parsed) in enumerate(zip(table.close, closes), start=1):
        if pd.isna(parsed) or not np.isfinite(parsed):
            raise PriceSeriesError("malformed close `{}`.".format(raw), path=path, row=row)
        if parsed <= 0:
            raise PriceSeriesError(
                "close must be positive, found {}.".format(parsed),
                path=path,
                row=row
            )
    duplicated = dates.duplicated()
    if duplicated.any():
        row = int(np.flatnonzero(duplicated.values)[0]) + 1
        raise PriceSeriesError(
            "duplicate date {}.".format(table.date.iloc[row - 1]),
            path=path,
            row=row
        )
    if not dates.is_monotonic_increasing:
        logger.warning("%s: dates are out of order, sorting ascending.", path)
    order = np.argsort(dates.values, kind="stable")
    return PriceSeries(
        symbol=symbol,
        dates=dates.values[order].astype("datetime64[D]"),
        closes=closes.values[order]
    )


def save_price_series(series: PriceSeries, path: str):
    """Write the series as a `date,close` CSV file.

    Parameters
    -----------------------
    series: PriceSeries,
        The series to store.
    path: str,
        Destination path.
    """
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    series.to_frame().to_csv(path, index=False, float_format="%.6f")


def load_price_directory(path: str) -> Dict[str, PriceSeries]:
    """Return the series of every CSV file in the directory, keyed by symbol.

    Parameters
    -----------------------
    path: str,
        Directory containing one `<symbol>.csv` file per stock.

    Raises
    -----------------------
    PriceSeriesError,
        When the directory is missing, holds no CSV file, or a file is
        invalid.

    Returns
    -----------------------
    Dictionary from symbol to series, sorted by symbol.
    """
    if not os.path.isdir(path):
        raise PriceSeriesError("directory does not exist.", path=path)
    paths = sorted(glob(os.path.join(path, "*.csv")))
    if not paths:
        raise PriceSeriesError("no input.", path=path)
    series = [load_price_series(file_path) for file_path in paths]
    return {
        price_series.symbol: price_series
        for price_series in series
    }
