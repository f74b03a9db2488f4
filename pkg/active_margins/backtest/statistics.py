"""Descriptive statistics with the lower empirical quantile rule."""
from typing import Dict, Sequence

import numpy as np

# Lower empirical quantile: the order statistic of rank ceil(q N).
QUANTILE_RULE = "inverted_cdf"

LOAN_QUANTILES = (0.20, 0.30, 0.40, 0.50, 0.60, 0.70, 0.80, 0.90, 0.95)
STOCK_QUANTILES = LOAN_QUANTILES
CALL_QUANTILES = (0.30, 0.50, 0.80, 0.90, 0.95, 0.99)


def quantile_label(level: float) -> str:
    """Return the column label of a quantile level."""
    return "{:.2f}".format(level)


def lower_quantiles(values: Sequence[float], levels: Sequence[float]) -> np.ndarray:
    """Return the lower empirical quantiles of the finite values, NaN if none."""
    values = np.asarray(values, dtype=float)
    values = values[np.isfinite(values)]
    if values.size == 0:
        return np.full(len(levels), np.nan)
    return np.quantile(values, levels, method=QUANTILE_RULE)


def describe(values: Sequence[float], levels: Sequence[float] = LOAN_QUANTILES) -> Dict[str, float]:
    """Return minimum, maximum, mean and lower quantiles of the finite values.

    Parameters
    ---------------------
    values: Sequence[float],
        Observations; NaN values are ignored.
    levels: Sequence[float] = LOAN_QUANTILES,
        Quantile levels.

    Returns
    ---------------------
    Dictionary keyed by "minimum", "maximum", "mean" and the quantile
    labels, NaN everywhere when no value is finite.
    """
    values = np.asarray(values, dtype=float)
    finite = values[np.isfinite(values)]
    empty = finite.size == 0
    return {
        "minimum": np.nan if empty else float(finite.min()),
        "maximum": np.nan if empty else float(finite.max()),
        "mean": np.nan if empty else float(finite.mean()),
        **{
            quantile_label(level): float(value)
            for level, value in zip(levels, lower_quantiles(finite, levels))
        }
    }
