"""Sub-module deducing risk-constrained margin systems."""
from .grid import GridConfig
from .indifference_set import (IndifferenceSet, EnumerationContext,
                               enumerate_indifference_set, select_optimal)
from .maintenance import min_maintenance_ratio
from .margin_selector import (MarginSystemSelector, RequiredMarginSelector,
                              DeducedMarginSelector, IndividualizedMarginSelector)

__all__ = [
    "GridConfig",
    "IndifferenceSet",
    "EnumerationContext",
    "enumerate_indifference_set",
    "select_optimal",
    "min_maintenance_ratio",
    "MarginSystemSelector",
    "RequiredMarginSelector",
    "DeducedMarginSelector",
    "IndividualizedMarginSelector"
]
