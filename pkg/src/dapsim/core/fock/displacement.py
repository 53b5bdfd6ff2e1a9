"""Matrix elements of the displacement operator in the Fock basis."""

import cmath
import math

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from dapsim.core.errors import DapsValueError
from dapsim.core.fock.distribution import MAX_FOCK_INDEX, check_index

# exp(-|gamma|^2 / 2) underflows beyond this.
MAX_DISPLACEMENT_INTENSITY = 1400.0


def _check_gamma(gamma: complex) -> complex:
    gamma = complex(gamma)
    if not cmath.isfinite(gamma):
        raise DapsValueError(f"Displacement amplitude must be finite, got {gamma!r}.")
    if abs(gamma) ** 2 > MAX_DISPLACEMENT_INTENSITY:
        raise DapsValueError(
            f"Displacement intensity {abs(gamma) ** 2:.1f} exceeds the supported "
            f"maximum of {MAX_DISPLACEMENT_INTENSITY}."
        )
    return gamma


def displaced_fock_overlap(n: int, m: int, gamma: complex) -> complex:
    """Return <n|D(gamma)|m> from the associated-Laguerre closed form.

    For n >= m the element is sqrt(m!/n!) gamma^(n-m) exp(-|gamma|^2/2)
    L_m^(n-m)(|gamma|^2); the n < m case follows from D(gamma)^dagger =
    D(-gamma). The prefactor is accumulated in log space so indices up to
    the supported maximum do not overflow.
    """
    check_index(n, "n")
    check_index(m, "m")
    gamma = _check_gamma(gamma)
    if gamma == 0:
        return 1.0 + 0j if n == m else 0j
    x = abs(gamma) ** 2
    if n >= m:
        lo, hi, amp = m, n, gamma
    else:
        lo, hi, amp = n, m, -gamma.conjugate()
    d = hi - lo
    log_pref = 0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) + d * math.log(abs(amp))
    log_pref -= 0.5 * x
    phase = cmath.exp(1j * d * cmath.phase(amp))
    return complex(phase * math.exp(log_pref) * eval_genlaguerre(lo, d, x))


def displacement_matrix(n_max: int, gamma: complex) -> np.ndarray:
    """Full matrix D[n, m] = <n|D(gamma)|m> for n, m <= n_max.

    Built row by row from the two-term recurrence

        D[n, 0] = gamma / sqrt(n) D[n-1, 0]
        D[n, m] = (-conj(gamma) D[n, m-1] + sqrt(n) D[n-1, m-1]) / sqrt(m)

    which keeps every intermediate bounded by one.
    """
    check_index(n_max, "n_max", MAX_FOCK_INDEX)
    gamma = _check_gamma(gamma)
    dim = n_max + 1
    out = np.zeros((dim, dim), dtype=complex)
    out[0, 0] = math.exp(-0.5 * abs(gamma) ** 2)
    sqrt = np.sqrt(np.arange(dim, dtype=float))
    # First column (coherent amplitudes) and first row.
    for n in range(1, dim):
        out[n, 0] = gamma / sqrt[n] * out[n - 1, 0]
        out[0, n] = -gamma.conjugate() / sqrt[n] * out[0, n - 1]
    for m in range(1, dim):
        out[1:, m] = (
            -gamma.conjugate() * out[1:, m - 1] + sqrt[1:] * out[:-1, m - 1]
        ) / sqrt[m]
    return out


def displaced_number_probabilities(n_max: int, gamma: complex) -> np.ndarray:
    """|<n|D(gamma)|m>|^2, the photon statistics of displaced Fock states.

    Column m is the distribution of D(gamma)|m> over n <= n_max.
    """
    return np.abs(displacement_matrix(n_max, gamma)) ** 2


__all__ = [
    "MAX_FOCK_INDEX",
    "displaced_fock_overlap",
    "displacement_matrix",
    "displaced_number_probabilities",
]
