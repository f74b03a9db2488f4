"""Sub-module with the Markov chain price model."""
from .state_space import StateSpace, build_state_space, state_of, states_of
from .transition_model import (TransitionModel, estimate_transition_matrix,
                               n_step, dump_model, load_model)
from .synthetic import (random_walk_model, simulate_chain,
                        synthetic_price_series, constant_price_series,
                        price_series_from_closes)

__all__ = [
    "StateSpace",
    "build_state_space",
    "state_of",
    "states_of",
    "TransitionModel",
    "estimate_transition_matrix",
    "n_step",
    "dump_model",
    "load_model",
    "random_walk_model",
    "simulate_chain",
    "synthetic_price_series",
    "constant_price_series",
    "price_series_from_closes"
]
