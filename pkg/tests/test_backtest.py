import json
import os

import numpy as np
import pandas as pd
import pytest
from active_margins.backtest import (TABLE_NAMES, BacktestConfig, LoanRecord,
                                     StockReport, aggregate_reports, describe,
                                     fit_model, lower_quantiles, pass_filter,
                                     read_table, run_backtests,
                                     run_stock_backtest, table_reports,
                                     write_summary, write_tables)
from active_margins.backtest import backtester
from active_margins.cpnr import CpnrQuery, cpnr, exact_first_passage
from active_margins.loans import (LoanOutcome, MarginSystem, provenances,
                                  simulate_loan)
from active_margins.markov import (constant_price_series,
                                   price_series_from_closes, random_walk_model,
                                   simulate_chain, state_of,
                                   synthetic_price_series)
from active_margins.optimizer import DeducedMarginSelector, GridConfig
from active_margins.utils import loan_start_indices

COARSE = GridConfig(step=0.05)

CONFIG = BacktestConfig(history=40, g=3, T=5, n_loans=6, grid=COARSE)

WALK = random_walk_model(n_states=80, base_price=10.0, tick=0.01, p_up=0.4, p_down=0.4, max_jump=1)


def walk_series(length: int, symbol: str = "WALK", seed: int = 42):
    return synthetic_price_series(WALK, length, symbol=symbol, seed=seed)


def outcome(negative: bool = False, called: bool = False, cost: float = 1.0) -> LoanOutcome:
    return LoanOutcome(
        tau=1 if called else None,
        tau_star=2 if called else None,
        default_return=-1.0 if negative else 1.0,
        negative=negative,
        n_calls=int(called),
        cost=cost
    )


def record(negative: bool = False, called: bool = False, cost: float = 1.0) -> LoanRecord:
    return LoanRecord(
        date="2020-01-02",
        start=0,
        P0=10.0,
        h=1,
        deduced=MarginSystem(m=0.4, delta=0.2, w=1.2, topup_target=1.2),
        set_size=1,
        cpnr=0.0,
        cpnr_exact=0.0,
        deduced_outcome=outcome(negative, called, cost),
        required_outcome=outcome(False, called, 2 * cost)
    )


def test_default_config():
    """Testing the default settings of the out-of-sample protocol."""
    cfg = BacktestConfig().validate()
    assert (cfg.history, cfg.g, cfg.T, cfg.n_loans, cfg.alpha) == (800, 25, 30, 200, 0.05)
    required = cfg.required_system
    assert (required.m, required.w, required.topup_target) == (0.5, 1.3, 1.5)
    assert required.provenance == provenances.required
    assert cfg.deduction_grid.alpha == 0.05
    assert BacktestConfig(alpha=0.01).deduction_grid.alpha == 0.01
    assert BacktestConfig.from_dict(json.loads(json.dumps(CONFIG.to_dict()))) == CONFIG
    with pytest.raises(ValueError):
        BacktestConfig(history=1).validate()
    with pytest.raises(ValueError):
        BacktestConfig(r=-0.1).validate()
    with pytest.raises(ValueError):
        BacktestConfig(required_w=1.6).validate()


def test_loan_start_indices():
    """Testing that the last eligible days host the loans."""
    assert loan_start_indices(1030, 800, 30, 200).tolist() == list(range(800, 1000))
    assert loan_start_indices(1040, 800, 30, 200).tolist() == list(range(810, 1010))
    with pytest.raises(ValueError):
        loan_start_indices(1029, 800, 30, 200)


def test_insufficient_series():
    """Testing that a short series is rejected."""
    with pytest.raises(ValueError):
        run_stock_backtest(walk_series(50), CONFIG)


def test_flat_series():
    """Testing that flat prices never call and always pass."""
    length = CONFIG.history + CONFIG.T + CONFIG.n_loans
    report = run_stock_backtest(constant_price_series(10.0, length), CONFIG)
    assert len(report.records) == CONFIG.n_loans
    assert report.n_calls_required == 0
    assert report.n_calls_deduced == 0
    assert report.neg_freq_required == 0.0
    assert report.neg_freq_deduced == 0.0
    assert report.passed
    assert report.n_infeasible == 0


def test_crash_series():
    """Testing that steadily crashing prices call every required loan."""
    length = CONFIG.history + CONFIG.T + CONFIG.n_loans
    series = price_series_from_closes(100 * 0.85 ** np.arange(length), symbol="CRASH")
    report = run_stock_backtest(series, CONFIG)
    assert report.n_calls_required == CONFIG.n_loans
    assert all(loan.required_outcome.tau == 2 for loan in report.records)
    assert report.n_calls_deduced <= CONFIG.n_loans


def test_records_recompute_independently():
    """Testing every record against a direct recomputation of its loan."""
    cfg = BacktestConfig(history=10, g=2, T=3, n_loans=2, grid=COARSE)
    series = walk_series(cfg.history + cfg.T + cfg.n_loans + 3)
    report = run_stock_backtest(series, cfg)
    closes = series.closes
    starts = [loan.start for loan in report.records]
    assert starts == list(range(len(series) - cfg.T - cfg.n_loans, len(series) - cfg.T))
    required = cfg.required_system
    for loan in report.records:
        start = loan.start
        path = closes[start + 1:start + 1 + cfg.T]
        assert loan.P0 == closes[start]
        assert loan.date == str(series.dates[start])
        model = fit_model(closes[start - cfg.history:start], cfg.g)
        assert loan.h == state_of(model.state_space, closes[start])
        assert loan.required_outcome == simulate_loan(required.loan(loan.P0, cfg.T), required, path)
        deduced = DeducedMarginSelector(cfg.deduction_grid).tune(model, loan.h, loan.P0, 0.0, cfg.T)
        assert loan.deduced == deduced
        if deduced is not None:
            spec = deduced.loan(loan.P0, cfg.T)
            assert loan.deduced_outcome == simulate_loan(spec, deduced, path)
            assert loan.cpnr == cpnr(CpnrQuery.from_loan(model, loan.h, spec, deduced.w)).cpnr
            assert loan.cpnr <= cfg.alpha
            assert 1 + deduced.m >= deduced.w


def test_no_lookahead():
    """Testing that later prices do not change the loans of earlier dates."""
    length = CONFIG.history + CONFIG.T + CONFIG.n_loans
    series = walk_series(length + 4)
    truncated = price_series_from_closes(series.closes[:length], symbol=series.symbol)
    short = run_stock_backtest(truncated, CONFIG)
    full = run_stock_backtest(series, CONFIG._replace(n_loans=CONFIG.n_loans + 4))
    assert full.records[:CONFIG.n_loans] == short.records


def test_backtest_is_deterministic():
    """Testing that rerunning a backtest reproduces every record."""
    series = walk_series(CONFIG.history + CONFIG.T + CONFIG.n_loans)
    assert run_stock_backtest(series, CONFIG).records == run_stock_backtest(series, CONFIG).records


def test_run_backtests_sorted_and_parallel():
    """Testing that reports come back sorted by symbol whatever the worker count."""
    length = CONFIG.history + CONFIG.T + CONFIG.n_loans
    series = {
        symbol: walk_series(length, symbol=symbol, seed=seed)
        for seed, symbol in enumerate(["CCC", "AAA", "BBB"])
    }
    sequential = run_backtests(series, CONFIG, n_jobs=1, verbose=False)
    parallel = run_backtests(series, CONFIG, n_jobs=2, verbose=False)
    assert [report.symbol for report in sequential] == ["AAA", "BBB", "CCC"]
    for first, second in zip(sequential, parallel):
        assert first.records == second.records


def test_progress_bar_tracks_completed_stocks(monkeypatch):
    """Testing that the loading bar advances on finished reports."""
    seen = {}

    def recording_tqdm(iterable, total=None, **kwargs):
        seen["total"] = total
        seen["symbols"] = []
        for report in iterable:
            seen["symbols"].append(report.symbol)
            yield report

    monkeypatch.setattr(backtester, "tqdm", recording_tqdm)
    length = CONFIG.history + CONFIG.T + CONFIG.n_loans
    series = {symbol: walk_series(length, symbol=symbol) for symbol in ("BBB", "AAA")}
    reports = run_backtests(series, CONFIG, n_jobs=2, verbose=True)
    assert seen == {"total": 2, "symbols": ["AAA", "BBB"]}
    assert [report.symbol for report in reports] == ["AAA", "BBB"]


def test_default_protocol_on_full_sized_fixture():
    """Testing the default protocol on 1030 closes: record count, no lookahead and table shapes."""
    cfg = BacktestConfig(grid=GridConfig(step=0.1))
    series = synthetic_price_series(random_walk_model(), 1030, symbol="FULL")
    assert fit_model(series.closes[:800], cfg.g).n >= 16
    report = run_stock_backtest(series, cfg)
    assert len(report.records) == 200
    assert [record.start for record in report.records] == list(range(800, 1000))
    truncated = price_series_from_closes(series.closes[:1020], symbol="FULL")
    tail = run_stock_backtest(truncated, cfg._replace(n_loans=2))
    assert tail.records == report.records[188:190]
    tables = aggregate_reports([report])
    for name in ("table1_initial", "table2_maintenance", "table3_proportion"):
        assert tables[name].shape == (12, 12)
    assert tables["table4_calls"].shape == (2, 9)
    assert tables["table5_cost"].shape == (24, 13)


def test_calibration_on_known_chain():
    """Testing the calibration verdict on loans simulated from the chain pricing them."""
    model = random_walk_model(n_states=60, tick=0.03, p_up=0.35, p_down=0.5, max_jump=2)
    h, T = 45, 10
    P0 = float(model.state_space.reps[h - 1])
    # A 10% fall triggers the call, while a loss needs 30% and a day moves at most 2 levels.
    system = MarginSystem(m=0.3, delta=0.0, w=1.2, topup_target=1.2)
    spec = system.loan(P0, T)
    query = CpnrQuery.from_loan(model, h, spec, system.w)
    recursive, exact = cpnr(query).cpnr, exact_first_passage(query).cpnr
    cfg = BacktestConfig()
    required = cfg.required_system
    records = []
    for seed in range(200):
        states = simulate_chain(model, T + 1, start_state=h, seed=seed)
        path = model.state_space.reps[states[1:] - 1]
        records.append(LoanRecord(
            date="2020-01-02",
            start=seed,
            P0=P0,
            h=h,
            deduced=system,
            set_size=1,
            cpnr=recursive,
            cpnr_exact=exact,
            deduced_outcome=simulate_loan(spec, system, path),
            required_outcome=simulate_loan(required.loan(P0, T), required, path)
        ))
    calibration = StockReport.from_records("KNOWN", records, cfg).calibration
    n_calls = sum(record.deduced_outcome.tau is not None for record in records)
    assert n_calls > 0
    assert calibration["n_calls"] == n_calls
    assert calibration["conditional_negative_frequency"] == 0.0
    assert calibration["bound"] == pytest.approx(0.05 + 3 * np.sqrt(0.05 * 0.95 / n_calls))
    assert calibration["within_bound"]
    assert exact == 0.0
    assert calibration["mean_cpnr_exact_first_passage"] == 0.0
    assert calibration["mean_cpnr"] == pytest.approx(recursive)
    assert recursive >= exact


def test_calibration_reports_both_methods():
    """Testing that the recursion and exact first passage means are reported side by side."""
    records = [
        record(negative=index < 2, called=index < 10)._replace(cpnr=0.01, cpnr_exact=0.03)
        for index in range(40)
    ]
    calibration = StockReport.from_records("AAA", records, BacktestConfig()).calibration
    assert calibration["n_calls"] == 10
    assert calibration["conditional_negative_frequency"] == pytest.approx(0.2)
    assert calibration["bound"] == pytest.approx(0.05 + 3 * np.sqrt(0.05 * 0.95 / 10))
    assert calibration["within_bound"] == (0.2 <= calibration["bound"])
    assert calibration["mean_cpnr"] == pytest.approx(0.01)
    assert calibration["mean_cpnr_exact_first_passage"] == pytest.approx(0.03)


def test_report_round_trip(tmp_path):
    """Testing that a stored report is rebuilt with the same records and verdicts."""
    report = run_stock_backtest(walk_series(CONFIG.history + CONFIG.T + CONFIG.n_loans), CONFIG)
    path = tmp_path / "WALK.json"
    path.write_text(json.dumps(report.to_dict()), encoding="utf-8")
    data = json.loads(path.read_text(encoding="utf-8"))
    assert data["config"]["history"] == CONFIG.history
    rebuilt = StockReport.from_dict(data)
    assert rebuilt.records == report.records
    assert rebuilt.passed == report.passed
    assert rebuilt.n_calls_deduced == report.n_calls_deduced
    assert rebuilt.config == report.config
    assert set(report.calibration) == {
        "n_calls", "conditional_negative_frequency", "bound", "within_bound",
        "mean_cpnr", "mean_cpnr_exact_first_passage"
    }


def test_pass_rule():
    """Testing the pass rule at and just above alpha."""
    config = BacktestConfig()
    at_alpha = StockReport.from_records("AAA", [record(True)] + [record()] * 19, config)
    assert at_alpha.neg_freq_deduced == 0.05
    assert at_alpha.passed
    above = StockReport.from_records("BBB", [record(True)] * 51 + [record()] * 949, config)
    assert not above.passed
    passing, failing = pass_filter([at_alpha, above])
    assert [report.symbol for report in passing] == ["AAA"]
    assert [report.symbol for report in failing] == ["BBB"]
    assert pass_filter([]) == ([], [])
    assert table_reports([above]) == [above]


def test_infeasible_records():
    """Testing that loans without a deduced system are counted and left out of deduced statistics."""
    infeasible = record()._replace(deduced=None, cpnr=None, cpnr_exact=None, deduced_outcome=None)
    report = StockReport.from_records("AAA", [infeasible, record(True)], BacktestConfig())
    assert report.n_infeasible == 1
    assert report.neg_freq_deduced == 1.0
    assert report.neg_freq_required == 0.0
    assert report.ratios["initial"]["mean"] == pytest.approx(0.4)
    assert report.ratios["proportion"]["mean"] == pytest.approx(0.5)
    assert np.isnan(infeasible.proportion)


def test_lower_quantiles():
    """Testing the lower empirical quantile rule."""
    values = np.arange(1, 101)
    assert lower_quantiles(values, [0.95]).tolist() == [95]
    assert lower_quantiles(values, [0.20, 0.99]).tolist() == [20, 99]
    assert np.isnan(lower_quantiles([], [0.5])).all()
    statistics = describe([3.0, 1.0, np.nan, 2.0])
    assert (statistics["minimum"], statistics["maximum"], statistics["mean"]) == (1.0, 3.0, 2.0)
    assert statistics["0.50"] == 2.0


def test_aggregate_reports():
    """Testing the shape and values of the summary tables."""
    base = StockReport.from_records(
        "AAA",
        [record(cost=float(cost)) for cost in range(1, 101)],
        BacktestConfig()
    )
    with pytest.raises(ValueError):
        aggregate_reports([])
    tables = aggregate_reports([base])
    assert set(tables) == set(TABLE_NAMES)
    for name in ("table1_initial", "table2_maintenance", "table3_proportion"):
        assert tables[name].shape == (12, 12)
        assert list(tables[name].index[:3]) == ["minimum", "maximum", "mean"]
    assert tables["table1_initial"].loc["mean"].tolist() == pytest.approx([0.4] * 12)
    assert tables["table4_calls"].shape == (2, 9)
    assert list(tables["table4_calls"].index) == ["Required", "Deduced"]
    cost = tables["table5_cost"]
    assert cost.shape == (24, 13)
    assert cost.loc[("0.95", "deduced"), "0.95"] == 95.0
    assert cost.loc[("0.95", "required"), "0.95"] == 190.0
    assert cost.loc[("0.95", "deduced"), "RD"] == pytest.approx(-0.5)
    assert np.isnan(cost.loc[("0.95", "required"), "RD"])
    two = aggregate_reports([
        base._replace(n_calls_required=10),
        base._replace(symbol="BBB", n_calls_required=20)
    ])
    assert two["table4_calls"].loc["Required", "mean"] == 15.0
    assert two["table4_calls"].loc["Required", "min"] == 10.0
    assert two["table4_calls"].loc["Required", "0.99"] == 20.0


def test_write_tables(tmp_path):
    """Testing that tables and summary embed the configuration."""
    report = StockReport.from_records("AAA", [record(cost=float(cost)) for cost in range(1, 11)], BacktestConfig())
    config = {"alpha": 0.01, "history": 800}
    paths = write_tables(aggregate_reports([report]), str(tmp_path), config)
    assert [os.path.basename(path) for path in paths] == ["{}.csv".format(name) for name in TABLE_NAMES]
    with open(paths[0], encoding="utf-8") as handle:
        header = [handle.readline().strip() for _ in range(3)]
    assert header == ["# alpha=0.01", "# history=800", "# quantile_rule=inverted_cdf"]
    table = read_table(paths[0])
    assert table.shape == (12, 12)
    cost = read_table(paths[-1])
    assert cost.shape == (24, 13)
    with open(write_summary([report], str(tmp_path), config), encoding="utf-8") as handle:
        summary = json.load(handle)
    assert summary["config"] == config
    assert summary["passed"] == ["AAA"] and summary["n_passed"] == 1
    assert summary["quantile_rule"] == "inverted_cdf"
    assert isinstance(pd.read_csv(paths[3], comment="#"), pd.DataFrame)
