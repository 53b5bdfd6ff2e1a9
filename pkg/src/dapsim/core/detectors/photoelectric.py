"""Photoelectric (binomial) counting and on-off click detectors."""

from typing import Optional

import numpy as np
from scipy.stats import binom, poisson

from dapsim.core.detectors.base import (
    CoherentResponse,
    DetectorModel,
    ResponseMatrix,
    check_efficiency,
    detector_logger,
    fold_last_bin,
)
from dapsim.core.errors import DapsValueError


def photoelectric_response(
    eta: float, K: Optional[int], n_max: int
) -> ResponseMatrix:
    """P(k|n) = C(n, k) eta^k (1 - eta)^(n - k).

    When K < n_max the mass of all outcomes k >= K is folded into the last
    bin and the matrix is flagged, since the ideal counter has no last bin.
    """
    eta = check_efficiency(eta)
    K = n_max if K is None else int(K)
    if K < 1:
        raise DapsValueError(f"Need at least one click bin, got K={K}.", field="bins")
    n = np.arange(n_max + 1)
    k = np.arange(K + 1)[:, None]
    p = binom.pmf(k, n[None, :], eta)
    folded = K < n_max
    if folded:
        p = fold_last_bin(p)
        detector_logger.warning(
            "Photoelectric detector with K=%d < n_max=%d: outcomes above K are "
            "folded into the last bin.",
            K,
            n_max,
        )
    return ResponseMatrix(p, label="photoelectric", overflow_folded=folded)


def onoff_response(eta: float, n_max: int) -> ResponseMatrix:
    """Click/no-click detector: P(0|n) = (1 - eta)^n."""
    eta = check_efficiency(eta)
    n = np.arange(n_max + 1)
    p0 = (1.0 - eta) ** n
    return ResponseMatrix(np.vstack([p0, 1.0 - p0]), label="onoff")


def _poisson_bins(mu: np.ndarray, eta: float, K: int) -> np.ndarray:
    mean = eta * mu
    k = np.arange(K + 1)
    p = poisson.pmf(k[None, :], mean[:, None])
    p[:, -1] = np.clip(1.0 - p[:, :-1].sum(axis=1), 0.0, 1.0)
    return p


class PhotoelectricDetector(DetectorModel):
    """Ideal photon counter with quantum efficiency eta.

    Args:
        eta (:obj:`float`): Quantum efficiency.
        bins (:obj:`int`, optional): Last outcome bin K. Defaults to the
            truncation of the requested matrix, i.e. no folding.

    """

    name = "photoelectric"
    description = "Binomial photon counting, normal-ordered exp(-eta n) POVM."

    def __init__(self, eta: float = 1.0, bins: Optional[int] = None):
        check_efficiency(eta)
        super().__init__(eta=float(eta), bins=bins)

    def outcome_bins(self, n_max: Optional[int] = None) -> int:
        """Last bin K: the configured bins, else the truncation."""
        if self.params["bins"] is not None:
            return int(self.params["bins"])
        if n_max is None:
            raise DapsValueError(
                "Photoelectric detector without explicit bins needs n_max to fix K.",
                section="detector",
                field="bins",
            )
        return int(n_max)

    def build_response_matrix(self, n_max: int) -> ResponseMatrix:
        """Binomial POVM, folded if bins < n_max."""
        return photoelectric_response(self.params["eta"], self.params["bins"], n_max)

    def coherent_response(self, n_max: Optional[int] = None) -> CoherentResponse:
        """Poisson outcome statistics, last bin holds the complement."""
        eta, K = self.params["eta"], self.outcome_bins(n_max)
        return CoherentResponse(
            lambda mu: _poisson_bins(mu, eta, K), K=K, label=self.name
        )


class OnOffDetector(DetectorModel):
    """Click detector without photon-number resolution (K = 1)."""

    name = "onoff"
    description = "On-off click detector, the K=1 special case."

    def __init__(self, eta: float = 1.0):
        check_efficiency(eta)
        super().__init__(eta=float(eta))

    def outcome_bins(self, n_max: Optional[int] = None) -> int:
        """Always one."""
        return 1

    def build_response_matrix(self, n_max: int) -> ResponseMatrix:
        """Click probabilities 1 - (1 - eta)^n."""
        return onoff_response(self.params["eta"], n_max)

    def coherent_response(self, n_max: Optional[int] = None) -> CoherentResponse:
        """No-click probability exp(-eta mu)."""
        eta = self.params["eta"]

        def evaluate(mu):
            p0 = np.exp(-eta * mu)
            return np.stack([p0, 1.0 - p0], axis=1)

        return CoherentResponse(evaluate, K=1, label=self.name)
