"""Command line front end of the margin risk engine."""
import argparse
import json
import logging
import os
import sys
from glob import glob
from typing import Dict, List, Optional, Tuple

from ..__version__ import __version__
from ..backtest import (StockReport, aggregate_reports, fit_model, run_backtests,
                        table_reports, write_summary, write_tables)
from ..cpnr import CpnrQuery, cpnr, exact_first_passage
from ..ingest import (PriceSeriesError, check_window_sufficiency,
                      load_price_directory, load_price_series, save_price_series)
from ..markov import (TransitionModel, load_model, random_walk_model,
                      state_of, synthetic_price_series)
from ..optimizer import DeducedMarginSelector, IndividualizedMarginSelector
from .config_file import RunConfig, load_config_file

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(name)s - %(message)s"

# Members with a dedicated flag.
SPECIAL_MEMBERS = ("verbosity", "out_dir")


def configure_logging(verbosity: int):
    """Configure the root logger for the given verbosity."""
    level = logging.DEBUG if verbosity > 0 else logging.WARNING if verbosity < 0 else logging.INFO
    # Only adds a handler when the root logger has none.
    logging.basicConfig(format=LOG_FORMAT)
    logging.getLogger().setLevel(level)
    logging.getLogger("joblib").setLevel(logging.WARNING)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Return the defaults, updated by the config file, updated by the flags."""
    config = RunConfig()
    if args.config is not None:
        config = load_config_file(args.config, config)
    return config.update({
        name: getattr(args, name, None)
        for name in RunConfig._fields
    })


def _header_lines(config: Dict) -> str:
    return "".join("# {}={}\n".format(key, value) for key, value in sorted(config.items()))


def _print_json(data: Dict):
    print(json.dumps(data, indent=2))


def _model_source(args: argparse.Namespace, config: RunConfig) -> Tuple[TransitionModel, Optional[float]]:
    """Return the chain and the price suggested for the trade date.

    A model file is used as is; a price file is fitted on its last
    `history` closes, and its last close is the suggested price.
    """
    if args.model is not None:
        return load_model(args.model), None
    if args.prices is None:
        raise ValueError("Either --model or --prices is required.")
    series = load_price_series(args.prices)
    window = series.closes[-config.history:]
    return fit_model(window, config.g), float(window[-1])


def _trade_price(args: argparse.Namespace, suggested: Optional[float]) -> float:
    if args.p0 is not None:
        return args.p0
    if suggested is None:
        raise ValueError("--p0 is required when the chain comes from --model.")
    return suggested


def cmd_validate(args: argparse.Namespace, config: RunConfig) -> int:
    """Validate a price file or every price file of a directory.

    Prints one JSON entry per file and returns 1 when any file is invalid.
    """
    path = args.prices or config.prices_dir
    if not path:
        raise ValueError("A price file or directory is required.")
    if os.path.isdir(path):
        paths = sorted(glob(os.path.join(path, "*.csv")))
        if not paths:
            raise PriceSeriesError("no input.", path=path)
    elif os.path.isfile(path):
        paths = [path]
    else:
        raise PriceSeriesError("no such file or directory.", path=path)
    entries = []
    for file_path in paths:
        try:
            series = load_price_series(file_path)
        except PriceSeriesError as exception:
            logger.error("%s", exception)
            entries.append({"path": file_path, "valid": False, "error": str(exception)})
            continue
        sufficiency = check_window_sufficiency(series, config.history, config.T, config.n_loans)
        entries.append({
            "path": file_path,
            "valid": True,
            "symbol": series.symbol,
            "length": len(series),
            **sufficiency._asdict()
        })
    invalid = sum(not entry["valid"] for entry in entries)
    _print_json({"files": entries, "invalid": invalid, "config": config.to_dict()})
    return 1 if invalid else 0


def cmd_cpnr(args: argparse.Namespace, config: RunConfig) -> int:
    """Print the CPNR of one loan as JSON."""
    model, suggested = _model_source(args, config)
    P0 = _trade_price(args, suggested)
    delta = config.required_delta if args.delta is None else args.delta
    Q0 = max((config.required_m - delta) * P0, 0.0) if args.q0 is None else args.q0
    w = config.required_w if args.w is None else args.w
    query = CpnrQuery(
        model=model,
        h=state_of(model.state_space, P0),
        P0=P0,
        Q0=Q0,
        delta=delta,
        w=w,
        r=config.r,
        T=config.T
    ).validate()
    output = {
        **cpnr(query).to_dict(),
        "query": {name: getattr(query, name) for name in CpnrQuery._fields if name != "model"},
        "config": config.to_dict()
    }
    if args.diagnostic_exact:
        output["exact_first_passage"] = exact_first_passage(query).to_dict()
    _print_json(output)
    return 0


def cmd_optimize(args: argparse.Namespace, config: RunConfig) -> int:
    """Print the deduced system of one trade date as JSON.

    With --q0 or --delta the customer's collateral is kept and only the
    least maintenance ratio is searched.
    """
    model, suggested = _model_source(args, config)
    P0 = _trade_price(args, suggested)
    h = state_of(model.state_space, P0)
    output = {"P0": P0, "h": h, "config": config.to_dict()}
    if args.q0 is not None or args.delta is not None:
        delta = 0.0 if args.delta is None else args.delta
        Q0 = max((config.required_m - delta) * P0, 0.0) if args.q0 is None else args.q0
        system = IndividualizedMarginSelector(Q0, delta, config.grid).tune(
            model, h, P0, config.r, config.T
        )
        output["Q0"] = Q0
    else:
        selector = DeducedMarginSelector(config.grid, verbose=config.verbosity > 0)
        system = selector.tune(model, h, P0, config.r, config.T)
        output["q"] = len(selector.indifference_set)
        if args.set_out is not None:
            with open(args.set_out, "w", encoding="utf-8", newline="") as handle:
                handle.write(_header_lines(config.to_dict()))
                selector.indifference_set.to_frame().to_csv(handle, index=False)
    if system is None:
        logger.warning("No margin system keeps the CPNR within %s.", config.alpha)
    output["system"] = None if system is None else system.to_dict()
    _print_json(output)
    return 0


def _write_outputs(reports: List[StockReport], config: RunConfig) -> List[str]:
    """Write the summary tables and metadata of the reports."""
    tables = aggregate_reports(table_reports(reports))
    paths = write_tables(tables, config.out_dir, config.to_dict())
    paths.append(write_summary(reports, config.out_dir, config.to_dict()))
    return paths


def cmd_backtest(args: argparse.Namespace, config: RunConfig) -> int:
    """Backtest every stock of the price directory and write the reports and tables."""
    if not config.prices_dir:
        raise ValueError("--prices-dir is required.")
    series = load_price_directory(config.prices_dir)
    reports = run_backtests(
        series,
        config.backtest,
        n_jobs=config.n_jobs,
        verbose=config.verbosity >= 0
    )
    reports_dir = os.path.join(config.out_dir, "reports")
    os.makedirs(reports_dir, exist_ok=True)
    for report in reports:
        with open(os.path.join(reports_dir, "{}.json".format(report.symbol)), "w", encoding="utf-8") as handle:
            json.dump(report.to_dict(), handle, indent=2)
    for path in _write_outputs(reports, config):
        logger.info("Written %s.", path)
    return 0


def cmd_report(args: argparse.Namespace, config: RunConfig) -> int:
    """Rebuild the summary tables from a directory of per-stock reports."""
    paths = sorted(glob(os.path.join(args.reports_dir, "*.json")))
    if not paths:
        raise ValueError("{}: no report found.".format(args.reports_dir))
    reports = []
    for path in paths:
        with open(path, "r", encoding="utf-8") as handle:
            reports.append(StockReport.from_dict(json.load(handle)))
    for path in _write_outputs(reports, config):
        logger.info("Written %s.", path)
    return 0


def cmd_synth(args: argparse.Namespace, config: RunConfig) -> int:
    """Write Markov-chain-driven synthetic price files, one per symbol."""
    model = random_walk_model() if args.model is None else load_model(args.model)
    os.makedirs(config.out_dir, exist_ok=True)
    for offset, symbol in enumerate(args.symbols):
        series = synthetic_price_series(
            model,
            args.length,
            symbol=symbol,
            seed=config.seed + offset
        )
        save_price_series(series, os.path.join(config.out_dir, "{}.csv".format(symbol)))
    with open(os.path.join(config.out_dir, "synth.json"), "w", encoding="utf-8") as handle:
        json.dump({
            "symbols": list(args.symbols),
            "length": args.length,
            "model": args.model,
            "config": config.to_dict()
        }, handle, indent=2)
    return 0


class ArgumentParser(argparse.ArgumentParser):
    """Parser exiting with status 1 on invalid arguments, as for any input error."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, "{}: error: {}\n".format(self.prog, message))


def _add_config_flags(parser: argparse.ArgumentParser):
    """Add one overriding flag per member of RunConfig."""
    parser.add_argument("--config", default=None, help="Path to a key=value config file.")
    for name in RunConfig._fields:
        if name in SPECIAL_MEMBERS:
            continue
        parser.add_argument(
            "--{}".format(name.replace("_", "-")),
            dest=name,
            type=RunConfig.__annotations__[name],
            default=None,
            help="Overrides `{}` (default {}).".format(name, RunConfig._field_defaults[name])
        )
    parser.add_argument("--out", "--out-dir", dest="out_dir", default=None, help="Output directory.")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", dest="verbosity", action="store_const", const=1, default=None)
    verbosity.add_argument("-q", "--quiet", dest="verbosity", action="store_const", const=-1)


def _add_model_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--model", default=None, help="JSON dump of a transition model.")
    parser.add_argument("--prices", default=None, help="Price CSV to fit the chain on.")
    parser.add_argument("--p0", type=float, default=None, help="Price on the trade date.")
    parser.add_argument("--q0", type=float, default=None, help="Cash collateral.")
    parser.add_argument("--delta", type=float, default=None, help="Stock fraction posted as collateral.")


def build_parser() -> ArgumentParser:
    """Return the parser of every subcommand."""
    common = ArgumentParser(add_help=False)
    _add_config_flags(common)
    parser = ArgumentParser(
        prog="active_margins",
        description="Margin loan risk engine based on the conditional probability of negative return."
    )
    parser.add_argument("--version", action="version", version=__version__)
    subparsers = parser.add_subparsers(dest="command", required=True)

    validate = subparsers.add_parser("validate", parents=[common], help="Validate price files.")
    validate.add_argument("--prices", default=None, help="Price CSV or directory of CSVs.")
    validate.set_defaults(function=cmd_validate)

    query = subparsers.add_parser("cpnr", parents=[common], help="Compute the CPNR of a loan.")
    _add_model_flags(query)
    query.add_argument("--w", type=float, default=None, help="Maintenance margin ratio.")
    query.add_argument("--diagnostic-exact", action="store_true", help="Add the exact first-passage CPNR.")
    query.set_defaults(function=cmd_cpnr)

    optimize = subparsers.add_parser("optimize", parents=[common], help="Deduce the margin system of a loan.")
    _add_model_flags(optimize)
    optimize.add_argument("--set-out", default=None, help="CSV path for the indifference set.")
    optimize.set_defaults(function=cmd_optimize)

    backtest = subparsers.add_parser("backtest", parents=[common], help="Backtest a directory of stocks.")
    backtest.set_defaults(function=cmd_backtest)

    report = subparsers.add_parser("report", parents=[common], help="Tabulate stored stock reports.")
    report.add_argument("--reports-dir", required=True, help="Directory of per-stock JSON reports.")
    report.set_defaults(function=cmd_report)

    synth = subparsers.add_parser("synth", parents=[common], help="Write synthetic price files.")
    synth.add_argument("--model", default=None, help="JSON dump of the driving chain; a random walk by default.")
    synth.add_argument("--length", type=int, default=1030, help="Number of trading days per file.")
    synth.add_argument("--symbols", nargs="+", default=["SYNTH"], help="Symbols of the files.")
    synth.set_defaults(function=cmd_synth)
    return parser


def main(argv: List[str] = None) -> int:
    """Run the command line and return its exit status.

    Input errors exit with 1, failed re-checks of deduced systems with 2.
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exception:
        return exception.code
    configure_logging(args.verbosity or 0)
    try:
        config = resolve_config(args)
        configure_logging(config.verbosity)
        return args.function(args, config)
    except AssertionError as exception:
        logger.error("Internal check failed: %s", exception)
        return 2
    except (OSError, ValueError, KeyError) as exception:
        logger.error("%s", exception)
        return 1


def entry_point():
    """Console script entry point."""
    sys.exit(main())
