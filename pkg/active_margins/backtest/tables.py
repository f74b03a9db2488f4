"""Cross-stock summary tables of the backtest reports."""
import json
import logging
import os
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd

from .reports import StockReport
from .statistics import (CALL_QUANTILES, LOAN_QUANTILES, QUANTILE_RULE,
                         STOCK_QUANTILES, describe, quantile_label)

logger = logging.getLogger(__name__)

TABLE_NAMES = (
    "table1_initial",
    "table2_maintenance",
    "table3_proportion",
    "table4_calls",
    "table5_cost"
)

STATISTIC_ROWS = ["minimum", "maximum", "mean", *map(quantile_label, LOAN_QUANTILES)]


def _columns(levels: Sequence[float]) -> List[str]:
    return ["min", "max", "mean", *map(quantile_label, levels)]


def _across_stocks(values: Sequence[float], levels: Sequence[float]) -> List[float]:
    statistics = describe(values, levels)
    return [
        statistics["minimum"],
        statistics["maximum"],
        statistics["mean"],
        *(statistics[quantile_label(level)] for level in levels)
    ]


def _statistics_table(per_stock: List[Dict[str, float]]) -> pd.DataFrame:
    """Return table of cross-stock statistics of each per-stock statistic."""
    return pd.DataFrame(
        [
            _across_stocks([stock[row] for stock in per_stock], STOCK_QUANTILES)
            for row in STATISTIC_ROWS
        ],
        index=pd.Index(STATISTIC_ROWS, name="statistic"),
        columns=_columns(STOCK_QUANTILES)
    )


def _cost_table(reports: List[StockReport]) -> pd.DataFrame:
    """Return the cost table, deduced row over required row, with the relative difference."""
    deduced = _statistics_table([report.cost["deduced"] for report in reports])
    required = _statistics_table([report.cost["required"] for report in reports])
    last = quantile_label(STOCK_QUANTILES[-1])
    deduced["RD"] = (deduced[last] - required[last]) / required[last]
    required["RD"] = np.nan
    table = pd.concat({"deduced": deduced, "required": required}, names=["system"])
    return table.swaplevel(0, 1).reindex(
        pd.MultiIndex.from_product([STATISTIC_ROWS, ["deduced", "required"]], names=["statistic", "system"])
    )


def aggregate_reports(reports: List[StockReport]) -> Dict[str, pd.DataFrame]:
    """Return the five summary tables across the given stock reports.

    Tables one to three describe the deduced initial ratio, maintenance
    ratio and stock proportion, table four the number of loans with a
    call per stock, and table five the loan costs under both systems with
    the relative difference of their 0.95 quantiles.

    Raises
    ---------------------
    ValueError,
        When the list of reports is empty.
    """
    if not reports:
        raise ValueError("Cannot aggregate an empty list of reports.")
    return {
        "table1_initial": _statistics_table([report.ratios["initial"] for report in reports]),
        "table2_maintenance": _statistics_table([report.ratios["maintenance"] for report in reports]),
        "table3_proportion": _statistics_table([report.ratios["proportion"] for report in reports]),
        "table4_calls": pd.DataFrame(
            [
                _across_stocks([report.n_calls_required for report in reports], CALL_QUANTILES),
                _across_stocks([report.n_calls_deduced for report in reports], CALL_QUANTILES)
            ],
            index=pd.Index(["Required", "Deduced"], name="system"),
            columns=_columns(CALL_QUANTILES)
        ),
        "table5_cost": _cost_table(reports)
    }


def pass_filter(reports: List[StockReport]) -> Tuple[List[StockReport], List[StockReport]]:
    """Return the reports passing the out-of-sample test and those failing it."""
    passing = [report for report in reports if report.passed]
    failing = [report for report in reports if not report.passed]
    logger.info("%d stocks passed and %d failed the out-of-sample test.", len(passing), len(failing))
    return passing, failing


def _header(config: Dict) -> str:
    return "".join(
        "# {}={}\n".format(key, value)
        for key, value in sorted(config.items())
    )


def write_tables(
    tables: Dict[str, pd.DataFrame],
    directory: str,
    config: Dict
) -> List[str]:
    """Write each table as `<name>.csv`, preceded by `# key=value` config lines.

    Returns
    ---------------------
    The written paths.
    """
    os.makedirs(directory, exist_ok=True)
    config = {**config, "quantile_rule": QUANTILE_RULE}
    paths = []
    for name in TABLE_NAMES:
        path = os.path.join(directory, "{}.csv".format(name))
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(_header(config))
            tables[name].to_csv(handle, float_format="%.6f")
        paths.append(path)
    return paths


def read_table(path: str) -> pd.DataFrame:
    """Return a table written by `write_tables`."""
    table = pd.read_csv(path, comment="#")
    index = [column for column in ("statistic", "system") if column in table.columns]
    return table.set_index(index)


def write_summary(
    reports: List[StockReport],
    directory: str,
    config: Dict
) -> str:
    """Write `summary.json` with the pass/fail split and the run metadata."""
    passing, failing = pass_filter(reports)
    path = os.path.join(directory, "summary.json")
    with open(path, "w", encoding="utf-8") as handle:
        json.dump({
            "config": config,
            "quantile_rule": QUANTILE_RULE,
            "n_passed": len(passing),
            "n_failed": len(failing),
            "passed": [report.symbol for report in passing],
            "failed": [report.symbol for report in failing],
            "n_infeasible": sum(report.n_infeasible for report in reports),
            "calibration_violations": [
                report.symbol
                for report in reports
                if not report.calibration["within_bound"]
            ]
        }, handle, indent=2)
    return path


def table_reports(reports: List[StockReport]) -> List[StockReport]:
    """Return the passing reports, or every report when none passed."""
    passing, _ = pass_filter(reports)
    if not passing:
        logger.warning("No stock passed the out-of-sample test, tabulating every stock.")
        return list(reports)
    return passing
