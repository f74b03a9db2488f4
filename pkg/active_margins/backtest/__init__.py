"""Sub-module running the rolling out-of-sample backtest."""
from .config import BacktestConfig
from .statistics import QUANTILE_RULE, describe, lower_quantiles
from .reports import LoanRecord, StockReport
from .backtester import fit_model, run_stock_backtest, run_backtests
from .tables import (TABLE_NAMES, aggregate_reports, pass_filter, write_tables,
                     read_table, write_summary, table_reports)

__all__ = [
    "BacktestConfig",
    "QUANTILE_RULE",
    "describe",
    "lower_quantiles",
    "LoanRecord",
    "StockReport",
    "fit_model",
    "run_stock_backtest",
    "run_backtests",
    "TABLE_NAMES",
    "aggregate_reports",
    "pass_filter",
    "write_tables",
    "read_table",
    "write_summary",
    "table_reports"
]
