from .random_chains import (random_stochastic_matrix, random_reps, random_model,
                            toy_model, random_query)
from .price_files import write_price_file

__all__ = [
    "random_stochastic_matrix",
    "random_reps",
    "random_model",
    "toy_model",
    "random_query",
    "write_price_file"
]
