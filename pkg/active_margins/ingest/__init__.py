"""Sub-module loading and validating daily closing price series."""
from .price_series import PriceSeries, PriceSeriesError, PRICE_DECIMALS
from .load import load_price_series, save_price_series, load_price_directory
from .sufficiency import check_window_sufficiency, WindowSufficiency

__all__ = [
    "PriceSeries",
    "PriceSeriesError",
    "PRICE_DECIMALS",
    "load_price_series",
    "save_price_series",
    "load_price_directory",
    "check_window_sufficiency",
    "WindowSufficiency"
]
