"""Configuration of the rolling out-of-sample backtest."""
from typing import Dict, NamedTuple

from ..loans import MarginSystem, required_margin_system
from ..optimizer import GridConfig


class BacktestConfig(NamedTuple):
    """Settings of the rolling out-of-sample backtest.

    Members
    ---------------------
    history: int = 800,
        Number of closes before the trade date used to fit the chain.
    g: int = 25,
        Number of distinct prices per state.
    T: int = 30,
        Duration of each loan in trading days.
    n_loans: int = 200,
        Number of consecutive loans per stock.
    alpha: float = 0.05,
        Bound on the CPNR of deduced systems and on the negative return
        frequency of passing stocks.
    r: float = 0.0,
        Daily riskless rate, also used as loan rate by the CPNR.
    R: float = 0.0,
        Daily loan rate used when simulating loans.
    required_m: float = 0.50,
        Initial margin ratio of the required system.
    required_w: float = 1.30,
        Maintenance ratio of the required system.
    required_topup: float = 1.50,
        Maintenance ratio restored by top-ups under the required system.
    required_delta: float = 0.0,
        Stock fraction of the required loans' initial margin.
    grid: GridConfig = GridConfig(),
        Grids of the deduced systems; its alpha is replaced by `alpha`.
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
    grid: GridConfig = GridConfig()

    def validate(self) -> "BacktestConfig":
        """Return the configuration itself after checking it.

        Raises
        ---------------------
        ValueError,
            When a count is not positive, a rate is negative or alpha
            leaves [0, 1].
        """
        for name in ("history", "g", "T", "n_loans"):
            if getattr(self, name) < 1:
                raise ValueError("{} must be at least 1, got {}.".format(name, getattr(self, name)))
        if self.history < 2:
            raise ValueError("history must hold at least 2 closes, got {}.".format(self.history))
        if self.r < 0 or self.R < 0:
            raise ValueError("Rates must be non-negative.")
        self.required_system.validate()
        self.deduction_grid.validate()
        return self

    @property
    def required_system(self) -> MarginSystem:
        """Return the static exchange-required system."""
        return required_margin_system(
            m=self.required_m,
            w=self.required_w,
            topup_target=self.required_topup,
            delta=self.required_delta
        )

    @property
    def deduction_grid(self) -> GridConfig:
        """Return the grid of the deduced systems with this alpha."""
        return self.grid._replace(alpha=self.alpha)

    def to_dict(self) -> Dict:
        """Return JSON-serializable description of the configuration."""
        return {**self._asdict(), "grid": self.grid._asdict()}

    @staticmethod
    def from_dict(data: Dict) -> "BacktestConfig":
        """Return configuration from its dictionary description."""
        data = dict(data)
        if "grid" in data:
            data["grid"] = GridConfig(**data["grid"])
        return BacktestConfig(**data)
