"""Coincidence count manipulation: symmetric and asymmetric parts."""

from typing import Callable, Tuple, Union

import numpy as np

from dapsim.core.dataset import CoincidenceCounts, outcome_tuples, tuple_histograms
from dapsim.core.errors import DapsValueError

Functional = Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]


def symmetrize(counts: CoincidenceCounts) -> Tuple[np.ndarray, np.ndarray]:
    """Split counts into the part symmetric under detector exchange and the rest.

    The symmetric part averages each entry over all tuples with the same
    outcome histogram, i.e. over every relabelling of the detectors. For two
    detectors this is (E(k1, k2) + E(k2, k1)) / 2. The two parts add up to
    the input exactly.
    """
    _, inverse = tuple_histograms(counts.N, counts.K)
    flat = counts.counts.reshape(-1).astype(float)
    sums = np.bincount(inverse, weights=flat)
    sizes = np.bincount(inverse)
    sym = (sums / sizes)[inverse].reshape(counts.counts.shape)
    return sym, counts.counts - sym


def functional_values(f: Functional, N: int, K: int) -> np.ndarray:
    """Values f(k_1, ..., k_N) on the full outcome grid.

    `f` is either an array of that shape or a vectorised callable taking
    the (T, N) array of outcome tuples.
    """
    shape = (K + 1,) * N
    if callable(f):
        values = np.asarray(f(outcome_tuples(N, K)), dtype=float)
        return values.reshape(shape)
    values = np.asarray(f, dtype=float)
    if values.shape != shape:
        raise DapsValueError(
            f"Functional of shape {values.shape} does not match the outcome "
            f"grid {shape}."
        )
    return values


def detector_counts(counts: CoincidenceCounts) -> np.ndarray:
    """Per tuple histogram (N_0, ..., N_K), shape (T, K+1) in tuple order."""
    hists, inverse = tuple_histograms(counts.N, counts.K)
    return hists[inverse]
