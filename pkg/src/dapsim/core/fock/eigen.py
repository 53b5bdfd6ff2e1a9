"""Small dense symmetric eigenproblems via cyclic Jacobi rotations.

The estimator only ever needs (K+1) x (K+1) matrices, with K the number of
detector bins, so a plain cyclic Jacobi sweep is both fast enough and
accurate to the last few ulps.
"""

import logging
from typing import Tuple

import numpy as np

from dapsim.core.errors import DapsConvergenceError, DapsValueError

eigen_logger = logging.getLogger("dapsim.fock")

MAX_SWEEPS = 60
SYMMETRY_TOLERANCE = 1e-12
RESIDUAL_TOLERANCE = 1e-10


def _check_symmetric(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DapsValueError(f"Expected a nonempty square matrix, got {a.shape}.")
    if not np.all(np.isfinite(a)):
        raise DapsValueError("Matrix has non-finite entries.")
    scale = max(1.0, float(np.max(np.abs(a))))
    asym = float(np.max(np.abs(a - a.T)))
    if asym > SYMMETRY_TOLERANCE * scale:
        raise DapsValueError(
            f"Matrix is not symmetric (max |A - A^T| = {asym:.3e}); "
            "symmetrise before calling."
        )
    return 0.5 * (a + a.T)


def jacobi_eigh(a, max_sweeps: int = MAX_SWEEPS) -> Tuple[np.ndarray, np.ndarray]:
    """All eigenvalues (ascending) and eigenvectors (as columns) of `a`."""
    a = _check_symmetric(a)
    n = a.shape[0]
    v = np.eye(n)
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(n), v
    for sweep in range(max_sweeps):
        off = float(np.sqrt(np.sum(np.triu(a, 1) ** 2)))
        if off <= 1e-15 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (
                    abs(theta) + np.sqrt(theta * theta + 1.0)
                )
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0
                vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    else:
        raise DapsConvergenceError(
            f"Jacobi rotations did not converge in {max_sweeps} sweeps.",
            iterations=max_sweeps,
        )
    eigen_logger.debug("Jacobi converged after %d sweeps (n=%d)", sweep, n)
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def _fix_sign(vec: np.ndarray) -> np.ndarray:
    """Make the first component which is not negligible positive."""
    for x in vec:
        if abs(x) > 1e-12:
            return vec if x > 0 else -vec
    return vec


def symmetric_eigen_min(a) -> Tuple[float, np.ndarray]:
    """Smallest eigenvalue of a symmetric matrix and a unit eigenvector.

    The eigenvector is normalised and its first non-negligible component is
    positive. A residual ``|A v - lambda v| <= 1e-10 |A|`` is guaranteed.
    """
    sym = _check_symmetric(a)
    w, v = jacobi_eigh(sym)
    lam = float(w[0])
    vec = v[:, 0] / np.linalg.norm(v[:, 0])
    vec = _fix_sign(vec)
    residual = float(np.linalg.norm(sym @ vec - lam * vec))
    norm = float(np.linalg.norm(sym))
    if residual > RESIDUAL_TOLERANCE * max(norm, 1e-300):
        raise DapsConvergenceError(
            f"Eigenvector residual {residual:.3e} exceeds tolerance for |A|={norm:.3e}."
        )
    return lam, vec
