"""Sub-module with the command line front end."""
from .config_file import RunConfig, load_config_file, parse_config_lines
from .main import (build_parser, main, entry_point, cmd_validate, cmd_cpnr,
                   cmd_optimize, cmd_backtest, cmd_report, cmd_synth)

__all__ = [
    "RunConfig",
    "load_config_file",
    "parse_config_lines",
    "build_parser",
    "main",
    "entry_point",
    "cmd_validate",
    "cmd_cpnr",
    "cmd_optimize",
    "cmd_backtest",
    "cmd_report",
    "cmd_synth"
]
