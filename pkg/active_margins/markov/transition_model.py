"""Class implementing the stationary Markov chain over a price state space."""
import json
import logging
from threading import Lock
from typing import Dict, List, Sequence

import numpy as np

from .state_space import StateSpace, states_of

logger = logging.getLogger(__name__)


class TransitionModel:
    """Stationary Markov chain with memoized n-step transition matrices.

    The one-step matrix is immutable. Powers are computed by iterated
    multiplication and every intermediate power is cached, under a lock so
    that many threads can query the same model.

    Private members
    ---------------------------
    _state_space: StateSpace,
        The state space of the chain.
    _one_step: np.ndarray,
        Row-stochastic one-step transition matrix.
    _counts: np.ndarray,
        Observed transition counts, when the model was estimated.
    _zero_rows: List[int],
        1-based states never observed as a source, given a self-loop.
    _power_cache: Dict[int, np.ndarray],
        Cached n-step matrices keyed by step count.
    _lock: Lock,
        Guards the power cache.
    """

    def __init__(
        self,
        state_space: StateSpace,
        one_step: np.ndarray,
        counts: np.ndarray = None,
        zero_rows: Sequence[int] = ()
    ):
        """Create new TransitionModel object.

        Parameters
        ---------------------------
        state_space: StateSpace,
            The state space of the chain.
        one_step: np.ndarray,
            The n x n one-step transition matrix.
        counts: np.ndarray = None,
            The observed transition counts, if any.
        zero_rows: Sequence[int] = (),
            1-based states whose row was replaced by a self-loop.

        Raises
        ---------------------------
        ValueError,
            When the matrix is not a row-stochastic matrix of the state
            space size.
        """
        one_step = np.array(one_step, dtype=float)
        n = state_space.n
        if one_step.shape != (n, n):
            raise ValueError(
                "The transition matrix must have shape ({0}, {0}), got {1}.".format(
                    n, one_step.shape
                )
            )
        if np.any(one_step < 0) or np.any(one_step > 1):
            raise ValueError("Transition probabilities must lie in [0, 1].")
        if not np.allclose(one_step.sum(axis=1), 1, rtol=0, atol=1e-12):
            raise ValueError("Every row of the transition matrix must sum to 1.")
        one_step.setflags(write=False)
        self._state_space = state_space
        self._one_step = one_step
        self._counts = None if counts is None else np.array(counts, dtype=int)
        self._zero_rows = list(zero_rows)
        self._power_cache = {1: one_step}
        self._lock = Lock()

    def __getstate__(self) -> Dict:
        state = self.__dict__.copy()
        del state["_lock"]
        return state

    def __setstate__(self, state: Dict):
        self.__dict__.update(state)
        self._lock = Lock()

    @property
    def state_space(self) -> StateSpace:
        """Return the state space of the chain."""
        return self._state_space

    @property
    def one_step(self) -> np.ndarray:
        """Return the one-step transition matrix."""
        return self._one_step

    @property
    def counts(self) -> np.ndarray:
        """Return the observed transition counts f_ij, if estimated."""
        return self._counts

    @property
    def zero_rows(self) -> List[int]:
        """Return the 1-based states given a self-loop for lack of data."""
        return list(self._zero_rows)

    @property
    def n(self) -> int:
        """Return the number of states."""
        return self._state_space.n

    def n_step(self, steps: int) -> np.ndarray:
        """Return the memoized `steps`-step transition matrix.

        Parameters
        ---------------------------
        steps: int,
            Number of steps, at least 1.

        Raises
        ---------------------------
        ValueError,
            When steps is smaller than 1.
        """
        if steps < 1:
            raise ValueError("The number of steps must be at least 1, got {}.".format(steps))
        power = self._power_cache.get(steps)
        if power is not None:
            return power
        with self._lock:
            largest = max(self._power_cache)
            power = self._power_cache[largest]
            for step in range(largest + 1, steps + 1):
                power = power @ self._one_step
                power.setflags(write=False)
                self._power_cache[step] = power
            return self._power_cache[steps]

    def to_dict(self) -> Dict:
        """Return JSON-serializable description of the model."""
        return {
            **self._state_space.to_dict(),
            "one_step": self._one_step.tolist(),
            "counts": None if self._counts is None else self._counts.tolist(),
            "zero_rows": self._zero_rows
        }

    @staticmethod
    def from_dict(data: Dict) -> "TransitionModel":
        """Return model from its dictionary description."""
        return TransitionModel(
            StateSpace.from_dict(data),
            np.array(data["one_step"], dtype=float),
            counts=data.get("counts"),
            zero_rows=data.get("zero_rows") or ()
        )


def n_step(model: TransitionModel, steps: int) -> np.ndarray:
    """Return the `steps`-step transition matrix P(1)^steps of the model."""
    return model.n_step(steps)


def estimate_transition_matrix(
    window: Sequence[float],
    space: StateSpace
) -> TransitionModel:
    """Return the maximum likelihood chain of the window over the state space.

    Consecutive equal prices count as self-transitions. States never
    observed as the source of a transition receive a self-loop.

    Parameters
    ---------------------------
    window: Sequence[float],
        Chronologically ordered closing prices.
    space: StateSpace,
        The state space to estimate the chain over.

    Raises
    ---------------------------
    ValueError,
        When the window holds fewer than two prices.
    """
    window = np.asarray(window, dtype=float)
    if window.size < 2:
        raise ValueError(
            "At least two prices are needed to estimate transitions, got {}.".format(window.size)
        )
    states = states_of(space, window) - 1
    counts = np.zeros((space.n, space.n), dtype=int)
    np.add.at(counts, (states[:-1], states[1:]), 1)
    totals = counts.sum(axis=1)
    zero_rows = np.flatnonzero(totals == 0)
    one_step = np.zeros((space.n, space.n))
    observed = totals > 0
    one_step[observed] = counts[observed] / totals[observed, None]
    one_step[zero_rows, zero_rows] = 1.0
    if zero_rows.size:
        logger.warning(
            "States %s were never left in the window, using self-loops.",
            (zero_rows + 1).tolist()
        )
    return TransitionModel(
        space,
        one_step,
        counts=counts,
        zero_rows=(zero_rows + 1).tolist()
    )


def dump_model(model: TransitionModel, path: str):
    """Write the model as JSON to the given path."""
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(model.to_dict(), handle, indent=2)


def load_model(path: str) -> TransitionModel:
    """Return the model stored as JSON at the given path."""
    with open(path, "r", encoding="utf-8") as handle:
        return TransitionModel.from_dict(json.load(handle))
