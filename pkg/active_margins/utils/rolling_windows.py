"""Module providing the rolling out-of-sample loan windows generator."""
from typing import Generator, Tuple

import numpy as np
from tqdm.auto import tqdm


def loan_start_indices(
    length: int,
    history: int,
    horizon: int,
    n_loans: int
) -> np.ndarray:
    """Return the indices of the last n_loans eligible loan start days.

    A start day t0 is eligible when it has `history` closes strictly before
    it and `horizon` closes strictly after it.

    Parameters
    -----------------------
    length: int,
        Number of closes in the series.
    history: int,
        Number of closes used to fit the model.
    horizon: int,
        Duration of the loan in trading days.
    n_loans: int,
        Number of consecutive loans to build.

    Raises
    -----------------------
    ValueError,
        When the series cannot host n_loans loans.

    Returns
    -----------------------
    Ascending array of start indices.
    """
    last = length - 1 - horizon
    first = last - n_loans + 1
    if first < history:
        raise ValueError(
            "A series of length {} cannot host {} loans with history {} and horizon {}.".format(
                length, n_loans, history, horizon
            )
        )
    return np.arange(first, last + 1)


def rolling_windows(
    closes: np.ndarray,
    history: int,
    horizon: int,
    n_loans: int,
    task_name: str = "",
    verbose: bool = True,
    leave: bool = False
) -> Generator[Tuple[int, int, np.ndarray, float, np.ndarray], None, None]:
    """Return generator of rolling out-of-sample loan windows.

    Parameters
    -----------------------
    closes: np.ndarray,
        The daily closing prices.
    history: int,
        Number of closes before the start day used to fit the model.
    horizon: int,
        Duration of the loan in trading days.
    n_loans: int,
        Number of loans.
    task_name: str = "",
        Name of the task to be shown in the loading bar.
    verbose: bool = True,
        Wether to show the loading bar.
        By default, True.
    leave: bool = False,
        Wether to leave the loading bar.
        By default, False.

    Returns
    -----------------------
    Generator of tuples with the loan number, the start index, the fitting
    window, the price at the start day and the path of the following
    `horizon` closes.
    """
    return (
        (
            loan_number,
            start,
            closes[start - history:start],
            float(closes[start]),
            closes[start + 1:start + 1 + horizon]
        )
        for loan_number, start in tqdm(
            enumerate(loan_start_indices(len(closes), history, horizon, n_loans)),
            desc="Running loans for {}".format(task_name),
            total=n_loans,
            disable=not verbose,
            leave=leave
        )
    )
