"""Markov-chain-driven synthetic price fixtures."""
from typing import Sequence

import numpy as np
import pandas as pd

from ..ingest import PriceSeries, PRICE_DECIMALS
from .state_space import StateSpace
from .transition_model import TransitionModel


def random_walk_model(
    n_states: int = 2000,
    base_price: float = 10.0,
    tick: float = 0.0003,
    p_up: float = 0.45,
    p_down: float = 0.45,
    max_jump: int = 100
) -> TransitionModel:
    """Return a lazy random walk on a geometric price grid.

    A move up or down spans between 1 and max_jump levels, uniformly.
    Moves crossing a grid border stop at the border.

    Parameters
    ---------------------------
    n_states: int = 2000,
        Number of price levels.
    base_price: float = 10.0,
        Lowest price level.
    tick: float = 0.0003,
        Relative increment between consecutive levels.
    p_up: float = 0.45,
        Probability of moving up.
    p_down: float = 0.45,
        Probability of moving down.
    max_jump: int = 100,
        Largest number of levels crossed by a single move.

    Raises
    ---------------------------
    ValueError,
        When the probabilities do not define a distribution.
    ValueError,
        When max_jump is not positive.
    """
    if n_states < 2:
        raise ValueError("The walk needs at least 2 states, got {}.".format(n_states))
    if min(p_up, p_down) < 0 or p_up + p_down > 1:
        raise ValueError("p_up and p_down must be non-negative and sum to at most 1.")
    if max_jump < 1:
        raise ValueError("max_jump must be at least 1, got {}.".format(max_jump))
    reps = np.round(base_price * (1 + tick) ** np.arange(n_states), PRICE_DECIMALS)
    one_step = np.zeros((n_states, n_states))
    states = np.arange(n_states)
    for jump in range(1, max_jump + 1):
        np.add.at(one_step, (states, np.minimum(states + jump, n_states - 1)), p_up / max_jump)
        np.add.at(one_step, (states, np.maximum(states - jump, 0)), p_down / max_jump)
    one_step[states, states] += 1 - p_up - p_down
    return TransitionModel(StateSpace.from_reps(reps), one_step)


def simulate_chain(
    model: TransitionModel,
    n_steps: int,
    start_state: int = None,
    seed: int = 42
) -> np.ndarray:
    """Return a simulated path of 1-based states of the chain.

    Parameters
    ---------------------------
    model: TransitionModel,
        The chain to simulate.
    n_steps: int,
        Number of states in the path, the start state included.
    start_state: int = None,
        1-based initial state.
        By default, the middle state.
    seed: int = 42,
        Seed of the random generator.
    """
    if n_steps < 1:
        raise ValueError("The path needs at least one state, got {}.".format(n_steps))
    if start_state is None:
        start_state = (model.n + 1) // 2
    if not 1 <= start_state <= model.n:
        raise ValueError("The start state must lie in [1, {}].".format(model.n))
    random_state = np.random.default_rng(seed)
    cumulative = np.cumsum(model.one_step, axis=1)
    path = np.empty(n_steps, dtype=int)
    path[0] = start_state - 1
    uniforms = random_state.uniform(size=n_steps - 1)
    for step, uniform in enumerate(uniforms, start=1):
        row = cumulative[path[step - 1]]
        path[step] = min(int(np.searchsorted(row, uniform, side="right")), model.n - 1)
    return path + 1


def synthetic_price_series(
    model: TransitionModel,
    length: int,
    symbol: str = "SYNTH",
    start_state: int = None,
    start_date: str = "2006-06-26",
    seed: int = 42
) -> PriceSeries:
    """Return a price series whose closes are the representative prices of a simulated path.

    Parameters
    ---------------------------
    model: TransitionModel,
        The chain driving the prices.
    length: int,
        Number of trading days.
    symbol: str = "SYNTH",
        Identifier of the series.
    start_state: int = None,
        1-based initial state.
        By default, the middle state.
    start_date: str = "2006-06-26",
        First trading day; business days follow.
    seed: int = 42,
        Seed of the random generator.
    """
    states = simulate_chain(model, length, start_state=start_state, seed=seed)
    return PriceSeries(
        symbol=symbol,
        dates=pd.bdate_range(start=start_date, periods=length).values,
        closes=model.state_space.reps[states - 1]
    )


def constant_price_series(
    price: float,
    length: int,
    symbol: str = "FLAT",
    start_date: str = "2006-06-26"
) -> PriceSeries:
    """Return a series closing at the same price every day."""
    return PriceSeries(
        symbol=symbol,
        dates=pd.bdate_range(start=start_date, periods=length).values,
        closes=np.full(length, price)
    )


def price_series_from_closes(
    closes: Sequence[float],
    symbol: str = "SERIES",
    start_date: str = "2006-06-26"
) -> PriceSeries:
    """Return a series with the given closes on consecutive business days."""
    return PriceSeries(
        symbol=symbol,
        dates=pd.bdate_range(start=start_date, periods=len(closes)).values,
        closes=closes
    )
