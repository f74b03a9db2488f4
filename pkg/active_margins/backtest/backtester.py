"""Rolling out-of-sample backtest of deduced against required margin systems."""
import logging
from typing import Dict, List

import numpy as np
from joblib import Parallel, delayed
from tqdm.auto import tqdm

from ..cpnr import CpnrQuery, cpnr, exact_first_passage
from ..ingest import PriceSeries, check_window_sufficiency
from ..loans import check_adequacy, simulate_loan
from ..markov import TransitionModel, build_state_space, estimate_transition_matrix, state_of
from ..optimizer import DeducedMarginSelector
from ..utils import get_worker_number, rolling_windows
from .config import BacktestConfig
from .reports import LoanRecord, StockReport

logger = logging.getLogger(__name__)


def fit_model(window: np.ndarray, g: int) -> TransitionModel:
    """Return the chain fitted on the window with g distinct prices per state."""
    return estimate_transition_matrix(window, build_state_space(window, g))


def run_stock_backtest(
    series: PriceSeries,
    cfg: BacktestConfig = BacktestConfig(),
    verbose: bool = False
) -> StockReport:
    """Return the backtest report of one stock.

    For each of the last n_loans eligible trade dates the chain is refitted
    on the `history` closes strictly before the date, the deduced system
    is selected, and both the deduced and the required loans are simulated
    over the following T closes.

    Parameters
    ---------------------
    series: PriceSeries,
        The closes of the stock.
    cfg: BacktestConfig = BacktestConfig(),
        The backtest settings.
    verbose: bool = False,
        Wether to show the loading bar.

    Raises
    ---------------------
    ValueError,
        When the series is too short for the requested loans.
    AssertionError,
        When a deduced system violates its constraints on re-evaluation.
    """
    cfg = cfg.validate()
    sufficiency = check_window_sufficiency(series, cfg.history, cfg.T, cfg.n_loans)
    if not sufficiency.sufficient:
        raise ValueError(
            "{} holds {} closes, {} are needed.".format(
                series.symbol, sufficiency.available, sufficiency.required
            )
        )
    required = cfg.required_system
    selector = DeducedMarginSelector(cfg.deduction_grid)
    records = []
    for _, start, window, P0, path in rolling_windows(
        series.closes,
        cfg.history,
        cfg.T,
        cfg.n_loans,
        task_name=series.symbol,
        verbose=verbose
    ):
        model = fit_model(window, cfg.g)
        h = state_of(model.state_space, P0)
        required_outcome = simulate_loan(
            required.loan(P0, cfg.T, r=cfg.r, R=cfg.R), required, path
        )
        deduced = selector.tune(model, h, P0, cfg.r, cfg.T)
        recursive, exact, deduced_outcome = None, None, None
        if deduced is None:
            logger.warning(
                "%s: no feasible deduced system on %s.", series.symbol, series.dates[start]
            )
        else:
            spec = deduced.loan(P0, cfg.T, r=cfg.r, R=cfg.R)
            query = CpnrQuery.from_loan(model, h, spec, deduced.w)
            recursive = cpnr(query).cpnr
            exact = exact_first_passage(query).cpnr
            if not check_adequacy(deduced.m, deduced.w) or recursive > cfg.alpha:
                raise AssertionError(
                    "{}: deduced system {} violates its constraints (CPNR {}).".format(
                        series.symbol, deduced, recursive
                    )
                )
            deduced_outcome = simulate_loan(spec, deduced, path)
        records.append(LoanRecord(
            date=str(series.dates[start]),
            start=int(start),
            P0=P0,
            h=h,
            deduced=deduced,
            set_size=len(selector.indifference_set),
            cpnr=recursive,
            cpnr_exact=exact,
            deduced_outcome=deduced_outcome,
            required_outcome=required_outcome
        ))
    report = StockReport.from_records(series.symbol, records, cfg)
    if not report.calibration["within_bound"]:
        logger.warning(
            "%s: negative frequency given a call %.4f exceeds the bound %.4f.",
            series.symbol,
            report.calibration["conditional_negative_frequency"],
            report.calibration["bound"]
        )
    return report


def run_backtests(
    series: Dict[str, PriceSeries],
    cfg: BacktestConfig = BacktestConfig(),
    n_jobs: int = 1,
    verbose: bool = True
) -> List[StockReport]:
    """Return the reports of every stock, sorted by symbol.

    Parameters
    ---------------------
    series: Dict[str, PriceSeries],
        The series of every stock, keyed by symbol.
    cfg: BacktestConfig = BacktestConfig(),
        The backtest settings.
    n_jobs: int = 1,
        Number of worker processes; non-positive means one per CPU.
    verbose: bool = True,
        Wether to show the loading bar.
    """
    symbols = sorted(series)
    reports = Parallel(n_jobs=get_worker_number(n_jobs), return_as="generator")(
        delayed(run_stock_backtest)(series[symbol], cfg)
        for symbol in symbols
    )
    return list(tqdm(
        reports,
        total=len(symbols),
        desc="Backtesting stocks",
        disable=not verbose,
        leave=False
    ))
