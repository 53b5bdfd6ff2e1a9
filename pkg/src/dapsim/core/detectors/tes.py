"""Transition-edge sensor model with a nonlinear response and K+1 bins.

POVM elements are :exp(-Gamma(n)) Gamma(n)^k / k!: for k < K with
Gamma(mu) = eta mu + eta2 mu^2, and the last bin takes the complement.
On Fock states the normal-ordered power mu^j becomes the falling factorial
n!/(n-j)!, so P(k|n) is a finite sum of the power series coefficients of
p_k(mu). The alternating sum cancels catastrophically in double
precision, which is why it is evaluated with mpmath.
"""

import functools
from typing import List, Optional, Tuple

import mpmath
import numpy as np

from dapsim.core.detectors.base import (
    CoherentResponse,
    DetectorModel,
    ResponseMatrix,
    check_efficiency,
    detector_logger,
)
from dapsim.core.errors import DapsConvergenceError, DapsValueError

MAX_ETA2 = 0.05
CLAMP_TOLERANCE = 1e-9


def _check_params(eta: float, eta2: float, K: int):
    check_efficiency(eta)
    if not 0.0 <= eta2 <= MAX_ETA2:
        raise DapsValueError(
            f"Nonlinear coefficient eta2 must lie in [0, {MAX_ETA2}], got {eta2!r}.",
            section="detector",
            field="eta2",
        )
    if K < 1:
        raise DapsValueError(
            f"Need at least one click bin, got K={K}.", section="detector", field="bins"
        )


def _series_coefficients(eta, eta2, k: int, order: int) -> List[mpmath.mpf]:
    """Power series of exp(-Gamma(mu)) Gamma(mu)^k / k! in mu up to `order`."""
    # exp(-eta mu) exp(-eta2 mu^2)
    lin = [(-eta) ** j / mpmath.factorial(j) for j in range(order + 1)]
    quad = [mpmath.mpf(0)] * (order + 1)
    for i in range(order // 2 + 1):
        quad[2 * i] = (-eta2) ** i / mpmath.factorial(i)
    damp = [
        mpmath.fsum(lin[j - i] * quad[i] for i in range(j + 1))
        for j in range(order + 1)
    ]
    # Gamma^k / k! = mu^k sum_i C(k, i) eta^(k-i) eta2^i mu^i / k!
    power = [mpmath.mpf(0)] * (order + 1)
    for i in range(k + 1):
        j = k + i
        if j <= order:
            power[j] = mpmath.binomial(k, i) * eta ** (k - i) * eta2 ** i
    power = [c / mpmath.factorial(k) for c in power]
    return [
        mpmath.fsum(damp[j - i] * power[i] for i in range(j + 1))
        for j in range(order + 1)
    ]


@functools.lru_cache(maxsize=32)
def _tes_rows(eta: float, eta2: float, K: int, n_max: int) -> Tuple[tuple, ...]:
    rows = []
    with mpmath.workdps(40 + n_max):
        m_eta, m_eta2 = mpmath.mpf(eta), mpmath.mpf(eta2)
        for k in range(K):
            coeffs = _series_coefficients(m_eta, m_eta2, k, n_max)
            row = []
            for n in range(n_max + 1):
                falling = mpmath.mpf(1)
                terms = [coeffs[0]]
                for j in range(1, n + 1):
                    falling *= n - j + 1
                    terms.append(coeffs[j] * falling)
                row.append(float(mpmath.fsum(terms)))
            rows.append(tuple(row))
    return tuple(rows)


def tes_response(eta: float, eta2: float, K: int, n_max: int) -> ResponseMatrix:
    """Fock-diagonal TES POVM with K+1 outcome bins.

    Raises:
        DapsValueError: If the parameters are outside their domain or the
            normal-ordered POVM is not positive (beyond round-off) for
            these parameters.

    """
    _check_params(eta, eta2, K)
    p = np.zeros((K + 1, n_max + 1))
    p[:K] = np.array(_tes_rows(float(eta), float(eta2), int(K), int(n_max)))
    worst = float(p[:K].min())
    if worst < -CLAMP_TOLERANCE:
        raise DapsValueError(
            f"TES POVM with eta={eta}, eta2={eta2} is not positive: "
            f"min P(k|n) = {worst:.3e}. Reduce eta2.",
            section="detector",
            field="eta2",
        )
    clamped = int(np.sum(p[:K] < 0))
    if clamped:
        detector_logger.debug("Clamped %d round-off negatives in TES POVM", clamped)
    p[:K] = np.clip(p[:K], 0.0, None)
    last = 1.0 - p[:K].sum(axis=0)
    if last.min() < -CLAMP_TOLERANCE:
        raise DapsConvergenceError(
            f"TES bins k < K sum to {1 - last.min():.12f} > 1; "
            "the normal-ordered series lost precision."
        )
    p[K] = np.clip(last, 0.0, 1.0)
    return ResponseMatrix(p, label="tes")


def tes_coherent_probabilities(
    mu: np.ndarray, eta: float, eta2: float, K: int
) -> np.ndarray:
    """p_k(mu) = exp(-Gamma) Gamma^k / k! for k < K, complement in bin K."""
    gamma = eta * mu + eta2 * mu ** 2
    out = np.zeros((mu.size, K + 1))
    term = np.exp(-gamma)
    for k in range(K):
        out[:, k] = term
        term = term * gamma / (k + 1)
    out[:, K] = np.clip(1.0 - out[:, :K].sum(axis=1), 0.0, 1.0)
    return out


class TesDetector(DetectorModel):
    """Photon-number resolving TES with finite resolution.

    Args:
        eta (:obj:`float`): Linear efficiency.
        eta2 (:obj:`float`): Quadratic response coefficient.
        bins (:obj:`int`): Last outcome bin K.

    """

    name = "tes"
    description = "Transition-edge sensor: nonlinear Gamma(n), K+1 bins."

    def __init__(self, eta: float = 0.9, eta2: float = 1e-4, bins: int = 4):
        _check_params(eta, eta2, bins)
        super().__init__(eta=float(eta), eta2=float(eta2), bins=int(bins))

    def outcome_bins(self, n_max: Optional[int] = None) -> int:
        """The configured K."""
        return self.params["bins"]

    def build_response_matrix(self, n_max: int) -> ResponseMatrix:
        """Normal-ordered POVM evaluated on Fock states."""
        return tes_response(
            self.params["eta"], self.params["eta2"], self.params["bins"], n_max
        )

    def coherent_response(self, n_max: Optional[int] = None) -> CoherentResponse:
        """Closed form p_k(mu)."""
        eta, eta2, K = self.params["eta"], self.params["eta2"], self.params["bins"]
        return CoherentResponse(
            lambda mu: tes_coherent_probabilities(mu, eta, eta2, K),
            K=K,
            label=self.name,
        )
