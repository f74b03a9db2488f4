"""Per-loan records and per-stock reports of the backtest."""
import math
from typing import Dict, List, NamedTuple, Optional

import numpy as np

from ..loans import LoanOutcome, MarginSystem, stock_proportion
from .config import BacktestConfig
from .statistics import describe

SYSTEMS = ("deduced", "required")
RATIOS = ("initial", "maintenance", "proportion")


class LoanRecord(NamedTuple):
    """The deduced and required outcomes of one loan.

    Members
    ---------------------
    date: str,
        Trade date of the loan.
    start: int,
        Index of the trade date in the series.
    P0: float,
        Price on the trade date.
    h: int,
        1-based state of P0 in the fitted chain.
    deduced: Optional[MarginSystem],
        The deduced system, None when the indifference set was empty.
    set_size: int,
        Number of elements of the indifference set.
    cpnr: Optional[float],
        CPNR of the deduced system.
    cpnr_exact: Optional[float],
        Exact first-passage CPNR of the deduced system.
    deduced_outcome: Optional[LoanOutcome],
        Outcome under the deduced system.
    required_outcome: LoanOutcome,
        Outcome under the required system.
    """
    date: str
    start: int
    P0: float
    h: int
    deduced: Optional[MarginSystem]
    set_size: int
    cpnr: Optional[float]
    cpnr_exact: Optional[float]
    deduced_outcome: Optional[LoanOutcome]
    required_outcome: LoanOutcome

    @property
    def feasible(self) -> bool:
        """Return whether a deduced system was found."""
        return self.deduced is not None

    @property
    def proportion(self) -> float:
        """Return the stock share of the deduced initial margin, NaN if undefined."""
        if self.deduced is None:
            return np.nan
        Q0 = max((self.deduced.m - self.deduced.delta) * self.P0, 0.0)
        try:
            return stock_proportion(Q0, self.deduced.delta, self.P0)
        except ValueError:
            return np.nan

    def to_dict(self) -> Dict:
        """Return JSON-serializable description of the record."""
        return {
            **self._asdict(),
            "deduced": None if self.deduced is None else self.deduced.to_dict(),
            "deduced_outcome": None if self.deduced_outcome is None else self.deduced_outcome.to_dict(),
            "required_outcome": self.required_outcome.to_dict()
        }

    @staticmethod
    def from_dict(data: Dict) -> "LoanRecord":
        """Return record from its dictionary description."""
        return LoanRecord(**{
            **data,
            "deduced": None if data["deduced"] is None else MarginSystem(**data["deduced"]),
            "deduced_outcome": None if data["deduced_outcome"] is None else LoanOutcome.from_dict(data["deduced_outcome"]),
            "required_outcome": LoanOutcome.from_dict(data["required_outcome"])
        })


def _frequency(flags: List[bool]) -> float:
    return sum(flags) / len(flags) if flags else 0.0


class StockReport(NamedTuple):
    """Aggregated backtest results of one stock.

    Members
    ---------------------
    symbol: str,
        Identifier of the stock.
    config: BacktestConfig,
        The configuration of the run.
    records: List[LoanRecord],
        One record per loan.
    neg_freq_deduced: float,
        Frequency of negative returns among loans with a deduced system.
    neg_freq_required: float,
        Frequency of negative returns under the required system.
    passed: bool,
        Whether neg_freq_deduced is at most alpha.
    n_calls_deduced: int,
        Loans with at least one call under the deduced system.
    n_calls_required: int,
        Loans with at least one call under the required system.
    n_infeasible: int,
        Loans whose indifference set was empty.
    cost: Dict[str, Dict[str, float]],
        Cost statistics per system.
    ratios: Dict[str, Dict[str, float]],
        Statistics of the deduced initial ratio, maintenance ratio and
        stock proportion.
    calibration: Dict[str, float],
        Realized negative frequency of deduced loans given a call, its
        3-sigma binomial bound, the verdict, and the mean CPNR from the
        recursion and from exact first passage.
    """
    symbol: str
    config: BacktestConfig
    records: List[LoanRecord]
    neg_freq_deduced: float
    neg_freq_required: float
    passed: bool
    n_calls_deduced: int
    n_calls_required: int
    n_infeasible: int
    cost: Dict[str, Dict[str, float]]
    ratios: Dict[str, Dict[str, float]]
    calibration: Dict[str, float]

    @staticmethod
    def from_records(
        symbol: str,
        records: List[LoanRecord],
        config: BacktestConfig
    ) -> "StockReport":
        """Return the report aggregating the given loan records.

        Parameters
        ---------------------
        symbol: str,
            Identifier of the stock.
        records: List[LoanRecord],
            One record per loan.
        config: BacktestConfig,
            The configuration of the run.
        """
        feasible = [record for record in records if record.feasible]
        deduced = [record.deduced_outcome for record in feasible]
        required = [record.required_outcome for record in records]
        neg_freq_deduced = _frequency([outcome.negative for outcome in deduced])
        called = [outcome for outcome in deduced if outcome.tau is not None]
        conditional = _frequency([outcome.negative for outcome in called])
        bound = (
            config.alpha + 3 * math.sqrt(config.alpha * (1 - config.alpha) / len(called))
            if called
            else 1.0
        )
        return StockReport(
            symbol=symbol,
            config=config,
            records=list(records),
            neg_freq_deduced=neg_freq_deduced,
            neg_freq_required=_frequency([outcome.negative for outcome in required]),
            passed=neg_freq_deduced <= config.alpha,
            n_calls_deduced=sum(outcome.called for outcome in deduced),
            n_calls_required=sum(outcome.called for outcome in required),
            n_infeasible=len(records) - len(feasible),
            cost={
                "deduced": describe([outcome.cost for outcome in deduced]),
                "required": describe([outcome.cost for outcome in required])
            },
            ratios={
                "initial": describe([record.deduced.m for record in feasible]),
                "maintenance": describe([record.deduced.w for record in feasible]),
                "proportion": describe([record.proportion for record in feasible])
            },
            calibration={
                "n_calls": len(called),
                "conditional_negative_frequency": conditional,
                "bound": bound,
                "within_bound": conditional <= bound,
                "mean_cpnr": float(np.mean([record.cpnr for record in feasible])) if feasible else 0.0,
                "mean_cpnr_exact_first_passage": float(np.mean([record.cpnr_exact for record in feasible])) if feasible else 0.0
            }
        )

    def to_dict(self) -> Dict:
        """Return JSON-serializable description of the report."""
        return {
            **self._asdict(),
            "config": self.config.to_dict(),
            "records": [record.to_dict() for record in self.records]
        }

    @staticmethod
    def from_dict(data: Dict) -> "StockReport":
        """Return report rebuilt from the records of its dictionary description."""
        return StockReport.from_records(
            data["symbol"],
            [LoanRecord.from_dict(record) for record in data["records"]],
            BacktestConfig.from_dict(data["config"])
        )
