"""Run configuration of the command line, read from `key=value` files."""
from typing import Dict, NamedTuple

from ..backtest import BacktestConfig
from ..optimizer import GridConfig


class RunConfig(NamedTuple):
    """Flat settings of a command line run.

    The backtest and grid settings keep the names of their
    BacktestConfig and GridConfig members; the grid alpha always
    follows `alpha`.
    """
    history: int = 800
    g: int = 25
    T: int = 30
    n_loans: int = 200
    alpha: float = 0.05
    r: float = 0.0
    R: float = 0.0
    required_m: float = 0.50
    required_w: float = 1.30
    required_topup: float = 1.50
    required_delta: float = 0.0
    m_min: float = 0.0
    m_max: float = 0.80
    delta_min: float = 0.0
    delta_max: float = 0.80
    w_min: float = 1.00
    w_max: float = 2.00
    step: float = 0.01
    prices_dir: str = ""
    out_dir: str = "results"
    seed: int = 42
    n_jobs: int = 1
    verbosity: int = 0

    @property
    def grid(self) -> GridConfig:
        """Return the grids of the deduced systems."""
        return GridConfig(**{
            name: getattr(self, name)
            for name in GridConfig._fields
        })

    @property
    def backtest(self) -> BacktestConfig:
        """Return the validated backtest settings."""
        return BacktestConfig(
            grid=self.grid,
            **{
                name: getattr(self, name)
                for name in BacktestConfig._fields
                if name != "grid"
            }
        ).validate()

    def update(self, values: Dict) -> "RunConfig":
        """Return a copy with the given values, skipping the None ones.

        Raises
        ---------------------
        ValueError,
            When a key is not a member of the configuration or its value
            cannot be converted to the member type.
        """
        unknown = sorted(set(values) - set(self._fields))
        if unknown:
            raise ValueError("Unknown configuration keys: {}.".format(", ".join(unknown)))
        converted = {}
        for key, value in values.items():
            if value is None:
                continue
            kind = type(self).__annotations__[key]
            try:
                converted[key] = kind(value)
            except ValueError:
                raise ValueError(
                    "The value `{}` of {} is not a valid {}.".format(value, key, kind.__name__)
                )
        return self._replace(**converted)

    def to_dict(self) -> Dict:
        """Return the settings as a dictionary."""
        return self._asdict()


def parse_config_lines(lines, source: str = "<config>") -> Dict[str, str]:
    """Return the raw `key=value` pairs of the given lines.

    Blank lines and lines starting with `#` are ignored.

    Raises
    ---------------------
    ValueError,
        When a line has no `=` or repeats a key.
    """
    values = {}
    for number, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError("{}: line {}: expected `key=value`, found `{}`.".format(source, number, line))
        key, value = (part.strip() for part in line.split("=", 1))
        if key in values:
            raise ValueError("{}: line {}: repeated key {}.".format(source, number, key))
        values[key] = value
    return values


def load_config_file(path: str, base: RunConfig = RunConfig()) -> RunConfig:
    """Return the base configuration updated with the values of the file.

    Raises
    ---------------------
    FileNotFoundError,
        When the file does not exist.
    ValueError,
        When a line is malformed, a key unknown or a value invalid.
    """
    with open(path, "r", encoding="utf-8") as handle:
        return base.update(parse_config_lines(handle, source=path))
