"""Records describing a CPNR query and its result."""
from typing import Dict, List, NamedTuple

from ..loans import LoanSpec
from ..markov import TransitionModel


class CpnrQuery(NamedTuple):
    """A loan evaluated under a Markov chain, with equal loan and riskless rates.

    Members
    ---------------------
    model: TransitionModel,
        The fitted price chain.
    h: int,
        1-based state of the price on the trade date.
    P0: float,
        Price on the trade date.
    Q0: float,
        Cash collateral.
    delta: float,
        Fraction of the purchased stock posted as collateral.
    w: float,
        Maintenance margin ratio.
    r: float,
        Daily rate, used both for the cash and for the loan.
    T: int,
        Duration of the loan in trading days.
    """
    model: TransitionModel
    h: int
    P0: float
    Q0: float
    delta: float
    w: float
    r: float
    T: int

    def validate(self) -> "CpnrQuery":
        """Return the query itself after checking its invariants.

        Raises
        ---------------------
        ValueError,
            When a field is out of its domain.
        """
        if not 1 <= self.h <= self.model.n:
            raise ValueError("h must lie in [1, {}], got {}.".format(self.model.n, self.h))
        if self.T < 1:
            raise ValueError("T must be at least 1, got {}.".format(self.T))
        if self.r < 0:
            raise ValueError("r must be non-negative, got {}.".format(self.r))
        if not self.P0 > 0:
            raise ValueError("P0 must be positive, got {}.".format(self.P0))
        return self

    @staticmethod
    def from_loan(model: TransitionModel, h: int, spec: LoanSpec, w: float) -> "CpnrQuery":
        """Return the query of a loan, using its riskless rate for both rates."""
        return CpnrQuery(
            model=model,
            h=h,
            P0=spec.P0,
            Q0=spec.Q0,
            delta=spec.delta,
            w=w,
            r=spec.r,
            T=spec.T
        ).validate()


class DayProbabilities(NamedTuple):
    """Probabilities of a first call, and of a call followed by a loss, on day t."""
    t: int
    prob_C: float
    prob_NC: float


class CpnrResult(NamedTuple):
    """Probability of a margin call, of a call followed by a loss, and their ratio.

    Members
    ---------------------
    prob_C: float,
        Probability of a margin call within the loan.
    prob_NC: float,
        Probability of a margin call followed by a negative return.
    cpnr: float,
        prob_NC / prob_C, or 0 when prob_C is 0.
    per_day: List[DayProbabilities],
        The day-by-day terms of the two sums.
    k: List[int],
        Call thresholds k_1..k_T, 0 meaning no call state.
    a: List[int],
        Loss thresholds a_1..a_T, 0 meaning no loss state.
    """
    prob_C: float
    prob_NC: float
    cpnr: float
    per_day: List[DayProbabilities]
    k: List[int]
    a: List[int]

    def to_dict(self) -> Dict:
        """Return JSON-serializable description of the result."""
        return {
            "prob_C": self.prob_C,
            "prob_NC": self.prob_NC,
            "cpnr": self.cpnr,
            "per_day": [day._asdict() for day in self.per_day],
            "k": list(self.k),
            "a": list(self.a)
        }


def conditional_ratio(prob_NC: float, prob_C: float) -> float:
    """Return prob_NC / prob_C, defined as 0 when prob_C is 0."""
    return prob_NC / prob_C if prob_C > 0 else 0.0
