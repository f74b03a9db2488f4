from .rolling_windows import rolling_windows, loan_start_indices
from .workers import get_worker_number

__all__ = [
    "rolling_windows",
    "loan_start_indices",
    "get_worker_number"
]
