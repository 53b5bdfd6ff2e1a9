"""The sampling formula with random and systematic errors.

For a functional f of the outcome tuple,

    mean   = sum f E(k) / E
    sigma  = sqrt((mean(f^2) - mean^2) / (E - 1))
    eps^2  = sum f^2 ((E(k) - E_sym(k)) / E)^2

where E_sym is the part of the counts symmetric under detector exchange.
sigma is the statistical error, eps bounds the bias from imperfectly
balanced multiplexing.
"""

import math
from dataclasses import dataclass

import numpy as np

from dapsim.core.dataset import CoincidenceCounts
from dapsim.core.errors import DapsValueError
from dapsim.core.estimator.counts import Functional, functional_values, symmetrize

ERROR_METHODS = ("propagation", "bootstrap")


@dataclass(frozen=True)
class EstimateWithError:
    """A mean with its random (sigma) and systematic (eps) errors."""

    mean: float
    sigma: float
    eps: float
    events: float
    method: str = "propagation"

    def __post_init__(self):
        for name in ("sigma", "eps"):
            val = getattr(self, name)
            if not val >= 0 or not math.isfinite(val):
                raise DapsValueError(f"Error {name}={val!r} must be finite and >= 0.")
        if self.method not in ERROR_METHODS:
            raise DapsValueError(f"Unknown error method {self.method!r}.")

    @property
    def delta(self) -> float:
        """Combined error sqrt(sigma^2 + eps^2)."""
        return math.hypot(self.sigma, self.eps)

    def significance(self) -> float:
        """Mean in units of the combined error (signed)."""
        if self.delta == 0:
            return math.copysign(math.inf, self.mean) if self.mean else 0.0
        return self.mean / self.delta

    def is_negative(self, threshold: float = 3.0) -> bool:
        """Whether the mean is below zero by at least `threshold` errors."""
        return self.mean < 0 and -self.significance() >= threshold

    def to_record(self) -> dict:
        """Serialisable representation."""
        return {
            "mean": self.mean,
            "sigma": self.sigma,
            "eps": self.eps,
            "delta": self.delta,
            "events": self.events,
            "method": self.method,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "EstimateWithError":
        """Rebuild from :meth:`to_record` output."""
        return cls(
            mean=rec["mean"],
            sigma=rec["sigma"],
            eps=rec["eps"],
            events=rec["events"],
            method=rec.get("method", "propagation"),
        )

    def __str__(self):
        return f"{self.mean:.6g} ± {self.delta:.2g}"


def estimate(
    f: Functional, counts: CoincidenceCounts, method: str = "propagation"
) -> EstimateWithError:
    """Sample mean of f with random and systematic error.

    Raises:
        DapsValueError: With fewer than two events, where the random
            error is undefined.

    """
    E = float(counts.counts.sum())
    if E < 2:
        raise DapsValueError(f"Need at least two events to estimate, got E={E:g}.")
    values = functional_values(f, counts.N, counts.K)
    c = counts.counts.astype(float)
    mean = float(np.sum(values * c) / E)
    second = float(np.sum(values ** 2 * c) / E)
    var = max(second - mean ** 2, 0.0)
    sigma = math.sqrt(var / (E - 1.0))
    _, asym = symmetrize(counts)
    eps = math.sqrt(float(np.sum(values ** 2 * (asym / E) ** 2)))
    return EstimateWithError(mean, sigma, eps, counts.E, method)


def product_functional(Z, N: int) -> np.ndarray:
    """f(k_1, ..., k_N) = prod_i z_{k_i} as a dense array."""
    z = np.asarray(Z, dtype=float)
    out = z
    for _ in range(N - 1):
        out = np.multiply.outer(out, z)
    return out


def generating_function(counts: CoincidenceCounts, Z) -> EstimateWithError:
    """Estimate of g_Z = < prod_k z_k^{N_k} > from coincidence counts."""
    z = np.asarray(Z, dtype=float)
    if z.ndim != 1 or z.size != counts.K + 1:
        raise DapsValueError(
            f"Weight vector has {z.size} entries, the counts have K+1={counts.K + 1} "
            "outcome bins."
        )
    if not np.all(np.isfinite(z)):
        raise DapsValueError("Weight vector has non-finite entries.")
    return estimate(product_functional(z, counts.N), counts)


def gz_weights(z: float, K: int) -> np.ndarray:
    """(1, z, z^2, ..., z^K)."""
    return float(z) ** np.arange(K + 1)


def daps_gz(counts: CoincidenceCounts, z: float) -> EstimateWithError:
    """The DAPS value G_z = g_{1, z, ..., z^K} at one LO setting."""
    if not math.isfinite(z):
        raise DapsValueError(f"z must be finite, got {z!r}.")
    return generating_function(counts, gz_weights(z, counts.K))
