"""Photon-number distributions and signal state specifications."""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
from scipy.special import gammaln
from scipy.stats import binom, poisson

from dapsim.core.errors import DapsTruncationError, DapsValueError

fock_logger = logging.getLogger("dapsim.fock")

# Largest photon number any part of the Fock numerics will work with.
MAX_FOCK_INDEX = 150
# Probability allowed outside the truncated space.
DEFAULT_TAIL_BOUND = 1e-10


class FockDistribution:
    """Photon-number probabilities P_n for n = 0..n_max.

    Instances are immutable. The array is normalised on construction and
    the mass removed by that renormalisation is kept as `truncation_loss`.

    Args:
        probs: Nonnegative weights indexed by photon number.
        max_loss (:obj:`float`): Largest acceptable missing mass before
            renormalisation. Larger deficits raise a truncation error.

    """

    def __init__(self, probs, max_loss: float = DEFAULT_TAIL_BOUND):
        arr = np.array(probs, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise DapsValueError("Photon-number probabilities must be a 1D vector.")
        if np.any(arr < -1e-12):
            raise DapsValueError(
                f"Negative photon-number probability {arr.min():.3e} encountered."
            )
        arr = np.clip(arr, 0.0, None)
        total = arr.sum()
        loss = 1.0 - total
        if abs(loss) > max_loss:
            raise DapsTruncationError(
                f"Photon-number distribution misses {loss:.3e} of its mass "
                f"at n_max={arr.size - 1} (allowed {max_loss:.1e}).",
                tail_mass=loss,
            )
        arr = arr / total
        arr.setflags(write=False)
        self._probs = arr
        self.truncation_loss = max(loss, 0.0)

    @property
    def probs(self) -> np.ndarray:
        """The (read only) probability vector."""
        return self._probs

    @property
    def n_max(self) -> int:
        """The truncation of the distribution."""
        return self._probs.size - 1

    def mean(self) -> float:
        """Mean photon number."""
        return float(np.dot(np.arange(self._probs.size), self._probs))

    def padded(self, n_max: int) -> np.ndarray:
        """Return the probabilities zero padded (or cut) to `n_max`."""
        out = np.zeros(n_max + 1)
        m = min(n_max, self.n_max) + 1
        out[:m] = self._probs[:m]
        return out

    def __repr__(self):
        return f"<FockDistribution: n_max={self.n_max}, mean={self.mean():.6g}>"

    def __eq__(self, other):
        if not isinstance(other, FockDistribution):
            return NotImplemented
        return self.n_max == other.n_max and np.array_equal(
            self._probs, other._probs
        )


def poisson_weights(mean: float, n_max: int) -> Tuple[np.ndarray, float]:
    """Poisson weights up to n_max and the mass beyond it."""
    n = np.arange(n_max + 1)
    w = poisson.pmf(n, mean) if mean > 0 else (n == 0).astype(float)
    return w, float(poisson.sf(n_max, mean)) if mean > 0 else 0.0


def thermal_weights(nbar: float, n_max: int) -> Tuple[np.ndarray, float]:
    """Bose-Einstein weights up to n_max and the mass beyond it."""
    n = np.arange(n_max + 1)
    if nbar == 0:
        return (n == 0).astype(float), 0.0
    q = nbar / (1.0 + nbar)
    w = np.exp(n * np.log(q)) / (1.0 + nbar)
    return w, float(q ** (n_max + 1))


def loss_diagonal(m: int, tau: float) -> FockDistribution:
    """Binomial photon survival of |m> through a transmittance `tau`."""
    if not 0.0 <= tau <= 1.0:
        raise DapsValueError(f"Transmittance must lie in [0, 1], got {tau!r}.")
    if m < 0 or m > MAX_FOCK_INDEX:
        raise DapsValueError(f"Fock index {m} outside [0, {MAX_FOCK_INDEX}].")
    return FockDistribution(binom.pmf(np.arange(m + 1), m, tau))


def attenuation_matrix(n_max: int, tau: float) -> np.ndarray:
    """Matrix B[k, j] = C(j, k) tau^k (1 - tau)^(j - k) of binomial loss."""
    if not 0.0 <= tau <= 1.0:
        raise DapsValueError(f"Transmittance must lie in [0, 1], got {tau!r}.")
    j = np.arange(n_max + 1)
    k = j[:, None]
    return binom.pmf(k, j[None, :], tau)


def attenuate(dist: FockDistribution, tau: float) -> FockDistribution:
    """Apply binomial loss to a diagonal photon-number distribution."""
    return FockDistribution(attenuation_matrix(dist.n_max, tau) @ dist.probs)


@dataclass(frozen=True)
class StateSpec:
    """A phase-insensitive signal state.

    Use the classmethod constructors rather than building this directly.
    `components` holds (weight, StateSpec) pairs for mixtures.
    """

    variant: str
    m: int = 0
    alpha: complex = 0j
    nbar: float = 0.0
    components: Tuple[Tuple[float, "StateSpec"], ...] = field(default_factory=tuple)
    phase_randomized: bool = False

    _variants = ("vacuum", "fock", "coherent", "thermal", "mixture")

    def __post_init__(self):
        if self.variant not in self._variants:
            raise DapsValueError(f"Unknown state variant {self.variant!r}.")
        if self.m < 0:
            raise DapsValueError(f"Fock index must be nonnegative, got {self.m}.")
        if self.nbar < 0:
            raise DapsValueError(f"Mean photon number must be >= 0, got {self.nbar}.")
        if not np.isfinite(complex(self.alpha)):
            raise DapsValueError("Coherent amplitude must be finite.")
        if self.variant == "mixture":
            weights = np.array([w for w, _ in self.components], dtype=float)
            if weights.size == 0:
                raise DapsValueError("A mixture needs at least one component.")
            if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
                raise DapsValueError("Mixture weights must be >= 0 and sum to 1.")

    @classmethod
    def vacuum(cls) -> "StateSpec":
        """The vacuum state."""
        return cls("vacuum")

    @classmethod
    def fock(cls, m: int) -> "StateSpec":
        """The Fock state |m>."""
        if m == 0:
            return cls.vacuum()
        return cls("fock", m=int(m))

    @classmethod
    def coherent(cls, alpha: complex, phase_randomized: bool = False) -> "StateSpec":
        """A coherent state, optionally with a uniformly random phase."""
        return cls("coherent", alpha=complex(alpha), phase_randomized=phase_randomized)

    @classmethod
    def thermal(cls, nbar: float) -> "StateSpec":
        """A thermal state with mean photon number `nbar`."""
        return cls("thermal", nbar=float(nbar))

    @classmethod
    def mixture(cls, components) -> "StateSpec":
        """A convex mixture of (weight, StateSpec) pairs."""
        comps = tuple((float(w), s) for w, s in components if w > 0)
        return cls("mixture", components=comps)

    @classmethod
    def fock_mixture(cls, weights) -> "StateSpec":
        """A photon-number diagonal state with the given weights."""
        w = np.asarray(weights, dtype=float)
        w = w / w.sum()
        nonzero = [(float(p), cls.fock(n)) for n, p in enumerate(w) if p > 0]
        if len(nonzero) == 1:
            return nonzero[0][1]
        # Renormalise after dropping exact zeros so the sum is exact.
        total = sum(p for p, _ in nonzero)
        return cls("mixture", components=tuple((p / total, s) for p, s in nonzero))

    @property
    def is_classical(self) -> bool:
        """Whether the state has a nonnegative P function."""
        if self.variant in ("vacuum", "coherent", "thermal"):
            return True
        if self.variant == "fock":
            return self.m == 0
        return all(s.is_classical for _, s in self.components)

    @property
    def is_rotationally_symmetric(self) -> bool:
        """Whether the state is invariant under phase rotations."""
        if self.variant == "coherent":
            return self.phase_randomized or self.alpha == 0
        if self.variant == "mixture":
            return all(s.is_rotationally_symmetric for _, s in self.components)
        return True

    def mean_photons(self) -> float:
        """Mean photon number of the state."""
        if self.variant == "fock":
            return float(self.m)
        if self.variant == "coherent":
            return abs(self.alpha) ** 2
        if self.variant == "thermal":
            return self.nbar
        if self.variant == "mixture":
            return sum(w * s.mean_photons() for w, s in self.components)
        return 0.0

    def support_hint(self) -> int:
        """A photon number above which the state carries negligible weight."""
        if self.variant == "fock":
            return self.m
        if self.variant == "mixture":
            return max(s.support_hint() for _, s in self.components)
        mu = self.mean_photons()
        if self.variant == "thermal":
            return int(np.ceil(25 * (mu + 1)))
        return int(np.ceil(mu + 10 * np.sqrt(mu)))

    def photon_weights(self, n_max: int) -> Tuple[np.ndarray, float]:
        """Photon-number diagonal up to n_max and the mass beyond it."""
        if self.variant == "vacuum":
            w = np.zeros(n_max + 1)
            w[0] = 1.0
            return w, 0.0
        if self.variant == "fock":
            w = np.zeros(n_max + 1)
            if self.m <= n_max:
                w[self.m] = 1.0
                return w, 0.0
            return w, 1.0
        if self.variant == "coherent":
            return poisson_weights(abs(self.alpha) ** 2, n_max)
        if self.variant == "thermal":
            return thermal_weights(self.nbar, n_max)
        w = np.zeros(n_max + 1)
        tail = 0.0
        for weight, comp in self.components:
            cw, ct = comp.photon_weights(n_max)
            w += weight * cw
            tail += weight * ct
        return w, tail

    def describe(self) -> str:
        """Short human readable label."""
        if self.variant == "fock":
            return f"fock({self.m})"
        if self.variant == "coherent":
            label = f"coherent({self.alpha.real:g}{self.alpha.imag:+g}j)"
            return label + (" [phase randomized]" if self.phase_randomized else "")
        if self.variant == "thermal":
            return f"thermal({self.nbar:g})"
        if self.variant == "mixture":
            return "mixture(" + ", ".join(
                f"{w:.3g}*{s.describe()}" for w, s in self.components
            ) + ")"
        return "vacuum"

    def to_record(self) -> dict:
        """Serialisable representation."""
        rec: dict = {"variant": self.variant}
        if self.variant == "fock":
            rec["m"] = self.m
        elif self.variant == "coherent":
            rec["alpha"] = [self.alpha.real, self.alpha.imag]
            rec["phase_randomized"] = self.phase_randomized
        elif self.variant == "thermal":
            rec["nbar"] = self.nbar
        elif self.variant == "mixture":
            rec["components"] = [[w, s.to_record()] for w, s in self.components]
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "StateSpec":
        """Rebuild a state from :meth:`to_record` output."""
        variant = rec.get("variant")
        if variant == "fock":
            return cls.fock(rec["m"])
        if variant == "coherent":
            re, im = rec["alpha"]
            return cls.coherent(complex(re, im), rec.get("phase_randomized", False))
        if variant == "thermal":
            return cls.thermal(rec["nbar"])
        if variant == "mixture":
            return cls(
                "mixture",
                components=tuple(
                    (float(w), cls.from_record(s)) for w, s in rec["components"]
                ),
            )
        if variant == "vacuum":
            return cls.vacuum()
        raise DapsValueError(f"Unknown state variant {variant!r} in record.")


def log_factorial(n) -> np.ndarray:
    """log(n!) for integer arrays."""
    return gammaln(np.asarray(n, dtype=float) + 1.0)


def check_index(n: int, label: str = "n", limit: Optional[int] = None):
    """Reject photon numbers outside the supported range."""
    limit = MAX_FOCK_INDEX if limit is None else limit
    if not 0 <= n <= limit:
        raise DapsValueError(
            f"Photon number {label}={n} outside the supported range [0, {limit}]."
        )
