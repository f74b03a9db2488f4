"""Sub-module with the deterministic arithmetic of margin loans."""
from .loan_spec import (LoanSpec, MarginSystem, LoanOutcome, provenances,
                        required_margin_system)
from .ratios import (initial_margin_ratio, check_adequacy, margins_at,
                     maintenance_ratio, stock_proportion)
from .scenarios import (DefaultScenario, TopupScenario, liquidation_return,
                        simulate_default_scenario, simulate_topup_scenario,
                        simulate_loan)

__all__ = [
    "LoanSpec",
    "MarginSystem",
    "LoanOutcome",
    "provenances",
    "required_margin_system",
    "initial_margin_ratio",
    "check_adequacy",
    "margins_at",
    "maintenance_ratio",
    "stock_proportion",
    "DefaultScenario",
    "TopupScenario",
    "liquidation_return",
    "simulate_default_scenario",
    "simulate_topup_scenario",
    "simulate_loan"
]
