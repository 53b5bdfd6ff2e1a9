"""Nonclassicality witnesses from coincidence counts.

Two witnesses are estimated:

* the optimised generating function. For two detectors g_Z = Z^T C Z
  with C the normalised coincidence matrix, so its minimum over unit Z is
  the smallest eigenvalue of the symmetrised C. Classical light gives a
  nonnegative value.
* the sub-multinomial test. With N_i the number of detectors reporting
  outcome i, F_ij = <N_i N_j> - delta_ij <N_i> are the factorial moments
  and M = N F - (N - 1) m m^T with m_i = <N_i>. M is positive semidefinite
  for classical light, so a negative smallest eigenvalue mu_min witnesses
  nonclassicality.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from dapsim.core.dataset import CoincidenceCounts, ScanDataset
from dapsim.core.errors import DapsDataError, DapsValueError
from dapsim.core.estimator.counts import detector_counts, symmetrize
from dapsim.core.estimator.estimate import EstimateWithError, estimate
from dapsim.core.fock.eigen import symmetric_eigen_min
from dapsim.core.seeding import BOOTSTRAP_STREAM, make_rng

estimator_logger = logging.getLogger("dapsim.estimator")

DEFAULT_RESAMPLES = 200
DEFAULT_NOMINAL_EVENTS = 1_000_000


@dataclass(frozen=True)
class EigenWitness:
    """Smallest eigenvalue of the coincidence matrix at one setting."""

    g: EstimateWithError
    z: np.ndarray
    index: int = 0
    beta: complex = 0j

    def to_record(self) -> dict:
        """Serialisable representation."""
        return {
            "index": self.index,
            "beta": [self.beta.real, self.beta.imag],
            "g": self.g.to_record(),
            "z": [float(v) for v in self.z],
        }


@dataclass(frozen=True)
class GMinResult:
    """Minimum of the optimised generating function over a scan."""

    g_min: EstimateWithError
    beta: complex
    index: int
    z: np.ndarray
    per_setting: List[EigenWitness] = field(default_factory=list)

    def to_record(self) -> dict:
        """Serialisable representation."""
        return {
            "g_min": self.g_min.to_record(),
            "index": self.index,
            "beta": [self.beta.real, self.beta.imag],
            "z": [float(v) for v in self.z],
        }


@dataclass(frozen=True)
class MultinomialMatrix:
    """The matrix M, its smallest eigenvalue and the eigenvector."""

    M: np.ndarray
    mu_min: EstimateWithError
    vector: np.ndarray

    def to_record(self) -> dict:
        """Serialisable representation."""
        return {
            "M": [[float(v) for v in row] for row in self.M],
            "mu_min": self.mu_min.to_record(),
            "vector": [float(v) for v in self.vector],
        }


def _require_pair(counts: CoincidenceCounts):
    if counts.N != 2:
        raise DapsValueError(
            f"The quadratic form reduction needs N=2 detectors, got N={counts.N}."
        )


def coincidence_matrix(counts: CoincidenceCounts) -> np.ndarray:
    """Symmetrised normalised coincidences E_sym(k1, k2) / E."""
    _require_pair(counts)
    sym, _ = symmetrize(counts)
    return sym / float(counts.counts.sum())


def eigen_witness(
    counts: CoincidenceCounts, index: int = 0, beta: complex = 0j
) -> EigenWitness:
    """Minimal g over unit weight vectors Z at one setting.

    The error treats the optimal Z as fixed and propagates the count
    errors through the quadratic form.
    """
    lam, z = symmetric_eigen_min(coincidence_matrix(counts))
    est = estimate(np.outer(z, z), counts)
    g = EstimateWithError(lam, est.sigma, est.eps, est.events, est.method)
    return EigenWitness(g=g, z=z, index=index, beta=complex(beta))


def bootstrap_eigen_min(
    counts: CoincidenceCounts,
    resamples: int = DEFAULT_RESAMPLES,
    seed: int = 0,
    setting: int = 0,
) -> EstimateWithError:
    """Smallest eigenvalue with a bootstrap random error.

    The counts are resampled multinomially `resamples` times. The
    systematic error is the propagated one, resampling cannot see it.
    """
    if resamples < 2:
        raise DapsValueError(f"Need at least two resamples, got {resamples}.")
    base = eigen_witness(counts)
    values = np.empty(resamples)
    for i in range(resamples):
        rng = make_rng(seed, setting, BOOTSTRAP_STREAM, i)
        lam, _ = symmetric_eigen_min(coincidence_matrix(counts.resampled(rng)))
        values[i] = lam
    sigma = float(np.std(values, ddof=1))
    return EstimateWithError(
        base.g.mean, sigma, base.g.eps, base.g.events, method="bootstrap"
    )


def g_min_scan(
    dataset: ScanDataset,
    nominal_events: float = DEFAULT_NOMINAL_EVENTS,
    method: str = "propagation",
    resamples: int = DEFAULT_RESAMPLES,
    seed: int = 0,
) -> GMinResult:
    """Minimum over LO settings of the optimised generating function.

    Args:
        dataset (:obj:`ScanDataset`): An N=2 scan.
        nominal_events (:obj:`float`): Event count for exact tables.
        method (:obj:`str`): `propagation` or `bootstrap` error bars.
        resamples (:obj:`int`): Bootstrap resamples.
        seed (:obj:`int`): Bootstrap seed.

    """
    if len(dataset) == 0:
        raise DapsDataError("Cannot minimise over an empty scan.")
    witnesses = []
    for s in dataset.settings:
        counts = s.counts(nominal_events)
        w = eigen_witness(counts, s.index, s.beta)
        if method == "bootstrap":
            g = bootstrap_eigen_min(counts, resamples, seed, s.index)
            w = EigenWitness(g=g, z=w.z, index=w.index, beta=w.beta)
        witnesses.append(w)
    best = min(witnesses, key=lambda w: w.g.mean)
    estimator_logger.info(
        "g_min = %s at setting #%d (|beta|^2=%.4g)",
        best.g,
        best.index,
        abs(best.beta) ** 2,
    )
    return GMinResult(
        g_min=best.g, beta=best.beta, index=best.index, z=best.z, per_setting=witnesses
    )


def _moments(counts: CoincidenceCounts):
    n_i = detector_counts(counts).astype(float)  # (T, K+1)
    freq = counts.frequencies().reshape(-1)
    m = freq @ n_i
    second = n_i.T @ (n_i * freq[:, None])
    return n_i, m, second - np.diag(m)


def multinomial_matrix(counts: CoincidenceCounts) -> np.ndarray:
    """M = N F - (N - 1) m m^T from factorial moments of the histogram."""
    N = counts.N
    if N < 2:
        raise DapsValueError("The multinomial test needs at least two detectors.")
    _, m, F = _moments(counts)
    M = N * F - (N - 1) * np.outer(m, m)
    return 0.5 * (M + M.T)


def multinomial_test(counts: CoincidenceCounts) -> MultinomialMatrix:
    """M, mu_min and its error with the eigenvector held fixed.

    For fixed v, mu = N (<f^2> - sum_i v_i^2 <N_i>) - (N - 1) <f>^2 with
    f = sum_i v_i N_i. Its linearisation is the mean of the per-tuple
    functional N (f^2 - sum_i v_i^2 N_i) - 2 (N - 1) <f> f, which is passed
    through the sampling formula for sigma and eps.
    """
    if float(counts.counts.sum()) < 2:
        raise DapsValueError("Need at least two events for the multinomial test.")
    N = counts.N
    n_i, m, _ = _moments(counts)
    M = multinomial_matrix(counts)
    mu, v = symmetric_eigen_min(M)
    f = n_i @ v
    f_mean = float(f @ counts.frequencies().reshape(-1))
    phi = N * (f ** 2 - n_i @ (v ** 2)) - 2.0 * (N - 1) * f_mean * f
    est = estimate(phi.reshape(counts.counts.shape), counts)
    mu_min = EstimateWithError(mu, est.sigma, est.eps, est.events, est.method)
    return MultinomialMatrix(M=M, mu_min=mu_min, vector=v)


def mu_min_scan(
    dataset: ScanDataset, nominal_events: float = DEFAULT_NOMINAL_EVENTS
) -> Optional[EstimateWithError]:
    """Smallest mu_min over the settings of a scan."""
    if len(dataset) == 0:
        raise DapsDataError("Cannot minimise over an empty scan.")
    values = [
        multinomial_test(s.counts(nominal_events)).mu_min for s in dataset.settings
    ]
    return min(values, key=lambda e: e.mean)

