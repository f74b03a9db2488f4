from typing import Sequence

import numpy as np
from active_margins.cpnr import CpnrQuery
from active_margins.markov import StateSpace, TransitionModel


def random_stochastic_matrix(n: int, random_state: np.random.Generator) -> np.ndarray:
    """Return dense random row-stochastic matrix."""
    matrix = random_state.dirichlet(np.ones(n), size=n)
    # Dirichlet rows sum to 1 only up to rounding.
    matrix[:, -1] = 1 - matrix[:, :-1].sum(axis=1)
    return np.clip(matrix, 0, 1)


def random_reps(n: int, random_state: np.random.Generator) -> np.ndarray:
    """Return strictly increasing random representative prices."""
    return np.round(5 + np.cumsum(random_state.uniform(0.05, 1.5, size=n)), 2)


def random_model(n: int, random_state: np.random.Generator) -> TransitionModel:
    """Return random chain with n single-price states."""
    return TransitionModel(
        StateSpace.from_reps(random_reps(n, random_state)),
        random_stochastic_matrix(n, random_state)
    )


def toy_model(reps: Sequence[float], one_step: Sequence[Sequence[float]]) -> TransitionModel:
    """Return chain with the given single-price states and matrix."""
    return TransitionModel(StateSpace.from_reps(reps), np.array(one_step, dtype=float))


def random_query(
    random_state: np.random.Generator,
    max_states: int = 8,
    max_days: int = 6
) -> CpnrQuery:
    """Return random CPNR query on a random chain."""
    model = random_model(int(random_state.integers(1, max_states + 1)), random_state)
    reps = model.state_space.reps
    P0 = float(random_state.uniform(reps[0], reps[-1] * 1.2))
    delta = float(random_state.uniform(0, 0.8))
    m = float(random_state.uniform(delta, 0.8))
    return CpnrQuery(
        model=model,
        h=int(random_state.integers(1, model.n + 1)),
        P0=P0,
        Q0=(m - delta) * P0,
        delta=delta,
        w=float(random_state.uniform(1.0, 1.0 + m)),
        r=float(random_state.choice([0.0, 0.0001, 0.01])),
        T=int(random_state.integers(1, max_days + 1))
    )
