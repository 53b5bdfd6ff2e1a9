"""Pairwise distinguishability of DAPS curves.

Two curves are indistinguishable at a setting when their values agree
within k combined errors. For a Gaussian difference the probability of
that is Phi(d + k) - Phi(d - k) with d the separation in units of the
combined error. The discrimination probability of two curves is one minus
the product of these over all settings.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
from scipy.special import ndtr

from dapsim.core.analysis.curves import RadialCurve, check_same_grid
from dapsim.core.errors import DapsValueError

analysis_logger = logging.getLogger("dapsim.analysis")

DEFAULT_WIDTH = 3.0


def _separation(a: RadialCurve, b: RadialCurve) -> np.ndarray:
    diff = np.abs(a.means - b.means)
    delta = np.hypot(a.deltas, b.deltas)
    safe = np.where(delta > 0, delta, 1.0)
    return np.where(delta > 0, diff / safe, np.where(diff == 0, 0.0, np.inf))


def discrimination_probability(
    a: RadialCurve, b: RadialCurve, width: float = DEFAULT_WIDTH
) -> float:
    """Probability that curves a and b are told apart on their common grid."""
    check_same_grid([a, b])
    d = _separation(a, b)
    same = ndtr(d + width) - ndtr(d - width)
    return float(1.0 - np.prod(same))


@dataclass(frozen=True)
class DiscriminationMatrix:
    """Symmetric matrix of pairwise discrimination probabilities."""

    labels: Tuple[str, ...]
    probabilities: np.ndarray

    def to_rows(self) -> List[list]:
        """CSV rows, header first."""
        rows: List[list] = [[""] + list(self.labels)]
        for label, row in zip(self.labels, self.probabilities):
            rows.append([label] + [float(v) for v in row])
        return rows

    def to_record(self) -> dict:
        """Serialisable representation."""
        return {
            "kind": "discrimination",
            "labels": list(self.labels),
            "probabilities": [[float(v) for v in row] for row in self.probabilities],
        }


def discrimination_matrix(
    curves: Sequence[RadialCurve],
    labels: Sequence[str] = (),
    width: float = DEFAULT_WIDTH,
) -> DiscriminationMatrix:
    """Discrimination probabilities between every pair of curves.

    The diagonal only depends on the number of settings:
    1 - (Phi(k) - Phi(-k))^n.
    """
    check_same_grid(curves)
    n = len(curves)
    labels = tuple(labels) or tuple(f"curve{i}" for i in range(n))
    if len(labels) != n:
        raise DapsValueError(f"Got {len(labels)} labels for {n} curves.")
    probs = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            probs[i, j] = probs[j, i] = discrimination_probability(
                curves[i], curves[j], width
            )
    analysis_logger.info(
        "Discrimination matrix over %d curves and %d settings",
        n,
        len(curves[0]),
    )
    return DiscriminationMatrix(labels, probs)
