"""Class implementing the sorted-price partition of a Markov chain state space."""
from typing import Dict, List, Sequence

import numpy as np

from ..ingest import PRICE_DECIMALS


class StateSpace:
    """Partition of the distinct observed prices into consecutive states.

    States are numbered from 1 to n. The representative price of a state
    is the smallest price assigned to it.

    Private members
    ---------------------------
    _reps: np.ndarray,
        Strictly increasing representative prices q_1..q_n.
    _members: List[np.ndarray],
        Ascending distinct prices assigned to each state.
    _group_size: int,
        Number of distinct prices per state (the last may hold fewer).
    """

    def __init__(
        self,
        members: Sequence[Sequence[float]],
        group_size: int
    ):
        """Create new StateSpace object.

        Parameters
        ---------------------------
        members: Sequence[Sequence[float]],
            Ascending distinct prices of each state, states in ascending order.
        group_size: int,
            Number of distinct prices per state.

        Raises
        ---------------------------
        ValueError,
            When the states are empty, overlapping or not ordered, or their
            sizes violate the group size.
        """
        if group_size < 1:
            raise ValueError("The group size must be at least 1, got {}.".format(group_size))
        if len(members) == 0:
            raise ValueError("A state space needs at least one state.")
        members = [np.array(state, dtype=float) for state in members]
        for index, state in enumerate(members):
            if state.size == 0 or state.size > group_size:
                raise ValueError(
                    "State {} holds {} prices, expected between 1 and {}.".format(
                        index + 1, state.size, group_size
                    )
                )
            if index < len(members) - 1 and state.size != group_size:
                raise ValueError(
                    "Only the last state may hold fewer than {} prices.".format(group_size)
                )
        flattened = np.concatenate(members)
        if np.any(np.diff(flattened) <= 0) or flattened[0] <= 0:
            raise ValueError("State prices must be positive and strictly increasing.")
        for state in members:
            state.setflags(write=False)
        self._members = members
        self._reps = np.array([state[0] for state in members])
        self._reps.setflags(write=False)
        self._group_size = group_size

    @staticmethod
    def from_reps(reps: Sequence[float]) -> "StateSpace":
        """Return state space with one price per state.

        Parameters
        ---------------------------
        reps: Sequence[float],
            Strictly increasing representative prices.
        """
        return StateSpace([[price] for price in reps], group_size=1)

    @property
    def reps(self) -> np.ndarray:
        """Return the representative prices q_1..q_n."""
        return self._reps

    @property
    def members(self) -> List[np.ndarray]:
        """Return the prices assigned to each state."""
        return list(self._members)

    @property
    def member_counts(self) -> List[int]:
        """Return the number of prices assigned to each state."""
        return [state.size for state in self._members]

    @property
    def group_size(self) -> int:
        """Return the number of distinct prices per state."""
        return self._group_size

    @property
    def n(self) -> int:
        """Return the number of states."""
        return self._reps.size

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, StateSpace)
            and self._group_size == other._group_size
            and len(self._members) == len(other._members)
            and all(
                np.array_equal(mine, theirs)
                for mine, theirs in zip(self._members, other._members)
            )
        )

    def __repr__(self) -> str:
        return "StateSpace(n={}, group_size={})".format(self.n, self._group_size)

    def to_dict(self) -> Dict:
        """Return JSON-serializable description of the state space."""
        return {
            "group_size": self._group_size,
            "reps": self._reps.tolist(),
            "member_counts": self.member_counts,
            "members": [state.tolist() for state in self._members]
        }

    @staticmethod
    def from_dict(data: Dict) -> "StateSpace":
        """Return state space from its dictionary description.

        When the members are missing, every representative price becomes a
        single-price state.
        """
        if "members" not in data:
            return StateSpace.from_reps(data["reps"])
        return StateSpace(data["members"], group_size=data["group_size"])


def build_state_space(window: Sequence[float], g: int) -> StateSpace:
    """Return the state space grouping every g distinct prices into a state.

    Parameters
    ---------------------------
    window: Sequence[float],
        Closing prices of the fitting window, in any order.
    g: int,
        Number of distinct prices per state.

    Raises
    ---------------------------
    ValueError,
        When the window is empty or g is smaller than one.

    Returns
    ---------------------------
    StateSpace with ceil(#distinct / g) states.
    """
    prices = np.round(np.asarray(window, dtype=float), PRICE_DECIMALS)
    if prices.size == 0:
        raise ValueError("Cannot build a state space from an empty window.")
    if g < 1:
        raise ValueError("The group size must be at least 1, got {}.".format(g))
    distinct = np.unique(prices)
    return StateSpace(
        [distinct[start:start + g] for start in range(0, distinct.size, g)],
        group_size=g
    )


def state_of(space: StateSpace, price: float) -> int:
    """Return the 1-based state index holding the given price.

    The states are the half-open intervals [q_k, q_{k+1}), the last one
    unbounded above; prices below q_1 are mapped to state 1.

    Parameters
    ---------------------------
    space: StateSpace,
        The state space.
    price: float,
        A positive price.

    Raises
    ---------------------------
    ValueError,
        When the price is not positive.
    """
    if not price > 0:
        raise ValueError("The price must be positive, got {}.".format(price))
    price = round(float(price), PRICE_DECIMALS)
    return max(int(np.searchsorted(space.reps, price, side="right")), 1)


def states_of(space: StateSpace, prices: Sequence[float]) -> np.ndarray:
    """Return the 1-based state indices of many prices, as `state_of` does."""
    prices = np.round(np.asarray(prices, dtype=float), PRICE_DECIMALS)
    return np.maximum(np.searchsorted(space.reps, prices, side="right"), 1)
