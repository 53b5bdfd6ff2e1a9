"""Weighted least squares fits of Gaussian-times-polynomial models.

Heralded DAPS curves of photoelectric-like detectors take the form

    G(x) = (f_0 + f_1 x + ... + f_m x^m) exp(-b x)

with the vacuum as the m = 0 case.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from dapsim.core.analysis.curves import RadialCurve
from dapsim.core.errors import DapsConvergenceError, DapsValueError

analysis_logger = logging.getLogger("dapsim.analysis")

STEP_TOLERANCE = 1e-10
MAX_ITERATIONS = 100
MAX_HALVINGS = 40
OUTLIER_FACTOR = 10.0


@dataclass(frozen=True)
class GaussPolyModel:
    """sum_j f_j x^j exp(-b x) in the abscissa of a curve."""

    b: float
    f: Tuple[float, ...]
    variable: str = "di"
    z: Optional[float] = None
    chi2: float = 0.0
    covariance: Optional[np.ndarray] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(float(v) for v in self.f))
        if not self.f:
            raise DapsValueError("A model needs at least the coefficient f_0.")
        if not self.b > 0:
            raise DapsValueError(f"Decay rate must be positive, got b={self.b!r}.")

    @property
    def degree(self) -> int:
        """Degree of the polynomial."""
        return len(self.f) - 1

    def evaluate(self, x) -> np.ndarray:
        """Model values at abscissae x."""
        x = np.asarray(x, dtype=float)
        return np.polynomial.polynomial.polyval(x, self.f) * np.exp(-self.b * x)

    def to_record(self) -> dict:
        """Serialisable representation."""
        rec = {
            "kind": "model",
            "b": self.b,
            "f": list(self.f),
            "degree": self.degree,
            "variable": self.variable,
            "z": self.z,
            "chi2": self.chi2,
        }
        if self.covariance is not None:
            rec["covariance"] = [[float(v) for v in row] for row in self.covariance]
        return rec

    @classmethod
    def from_record(cls, rec: dict) -> "GaussPolyModel":
        """Rebuild from :meth:`to_record` output."""
        cov = rec.get("covariance")
        return cls(
            b=rec["b"],
            f=tuple(rec["f"]),
            variable=rec.get("variable", "di"),
            z=rec.get("z"),
            chi2=rec.get("chi2", 0.0),
            covariance=None if cov is None else np.array(cov, dtype=float),
        )


@dataclass(frozen=True)
class FitResult:
    """Parameters, their covariance and chi^2 of a Gauss-Newton fit."""

    params: np.ndarray
    covariance: np.ndarray
    chi2: float
    iterations: int


def gauss_newton(
    model: Callable[[np.ndarray, np.ndarray], np.ndarray],
    jacobian: Callable[[np.ndarray, np.ndarray], np.ndarray],
    p0: Sequence[float],
    x,
    y,
    weights,
    tol: float = STEP_TOLERANCE,
    max_iter: int = MAX_ITERATIONS,
) -> FitResult:
    """Minimise sum w (y - model(p, x))^2 by Gauss-Newton with step halving.

    Converges when the step is below `tol` relative to the parameter size.

    Raises:
        DapsConvergenceError: Without convergence after `max_iter` steps.

    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sw = np.sqrt(np.asarray(weights, dtype=float))
    p = np.asarray(p0, dtype=float).copy()

    def chi2(params):
        return float(np.sum((sw * (y - model(params, x))) ** 2))

    current = chi2(p)
    for iteration in range(1, max_iter + 1):
        r = sw * (y - model(p, x))
        J = sw[:, None] * jacobian(p, x)
        step, *_ = np.linalg.lstsq(J, r, rcond=None)
        scale = 1.0
        for _ in range(MAX_HALVINGS):
            trial = chi2(p + scale * step)
            if np.isfinite(trial) and trial <= current:
                break
            scale *= 0.5
        else:
            # No descent along the step: p is already at the minimum.
            scale = 0.0
        p = p + scale * step
        current = chi2(p)
        if scale * np.linalg.norm(step) <= tol * (1.0 + np.linalg.norm(p)):
            J = sw[:, None] * jacobian(p, x)
            cov = np.linalg.pinv(J.T @ J)
            analysis_logger.debug(
                "Gauss-Newton converged after %d iterations, chi2=%.4g",
                iteration,
                current,
            )
            return FitResult(p, cov, current, iteration)
    raise DapsConvergenceError(
        f"Gauss-Newton fit did not converge in {max_iter} iterations.",
        iterations=max_iter,
    )


def fit_weights(deltas) -> np.ndarray:
    """1/Delta^2 weights, with points far above the median error damped.

    Points with Delta above ten times the median keep a weight reduced by
    a further (10 median / Delta)^2. Without any error information all
    weights are one.
    """
    deltas = np.asarray(deltas, dtype=float)
    positive = deltas[deltas > 0]
    if positive.size == 0:
        return np.ones_like(deltas)
    d = np.where(deltas > 0, deltas, positive.min())
    weights = 1.0 / d ** 2
    cap = OUTLIER_FACTOR * float(np.median(d))
    outliers = d > cap
    if outliers.any():
        analysis_logger.warning(
            "Down-weighting %d point(s) with errors above %.3g.",
            int(outliers.sum()),
            cap,
        )
        weights[outliers] *= (cap / d[outliers]) ** 2
    return weights


def _design(x: np.ndarray, degree: int, b: float) -> np.ndarray:
    return np.vander(x, degree + 1, increasing=True) * np.exp(-b * x)[:, None]


def _poly_model(degree: int):
    def model(p, x):
        return np.polynomial.polynomial.polyval(x, p[:-1]) * np.exp(-p[-1] * x)

    def jacobian(p, x):
        design = _design(x, degree, p[-1])
        return np.column_stack([design, -x * (design @ p[:-1])])

    return model, jacobian


def _linear_coefficients(x, y, w, degree: int, b: float) -> np.ndarray:
    sw = np.sqrt(w)
    coef, *_ = np.linalg.lstsq(sw[:, None] * _design(x, degree, b), sw * y, rcond=None)
    return coef


def _log_linear_guess(x, y, w) -> Tuple[float, float]:
    positive = y > 0
    if positive.sum() < 2:
        raise DapsValueError(
            "Need at least two positive points to initialise a Gaussian fit."
        )
    xp, yp = x[positive], y[positive]
    # d log y = dy / y, so log-space weights scale with y^2.
    slope, intercept = np.polyfit(xp, np.log(yp), 1, w=np.sqrt(w[positive]) * yp)
    return float(np.exp(intercept)), max(float(-slope), 1e-6)


def fit_vacuum(curve: RadialCurve) -> GaussPolyModel:
    """Fit f_0 exp(-b x) to the vacuum DAPS curve.

    Raises:
        DapsValueError: With fewer than three points, or when the curve
            is not positive at its first point.
        DapsConvergenceError: When the fit does not converge.

    """
    if len(curve) < 3:
        raise DapsValueError(f"A vacuum fit needs >= 3 points, got {len(curve)}.")
    x, y = curve.x, curve.means
    if not y[0] > 0:
        raise DapsValueError(
            "The vacuum curve must be positive at its smallest abscissa."
        )
    w = fit_weights(curve.deltas)
    f0, b = _log_linear_guess(x, y, w)
    model, jac = _poly_model(0)
    res = gauss_newton(model, jac, [f0, b], x, y, w)
    out = GaussPolyModel(
        b=float(res.params[1]),
        f=(float(res.params[0]),),
        variable=curve.variable,
        z=curve.z,
        chi2=res.chi2,
        covariance=res.covariance,
    )
    analysis_logger.info("Vacuum fit: f0=%.6g, b=%.6g", out.f[0], out.b)
    return out


def fit_heralded(
    curve: RadialCurve,
    k_h: int,
    vacuum: Optional[GaussPolyModel] = None,
    fix_decay: bool = False,
) -> GaussPolyModel:
    """Fit a degree k_h Gaussian-polynomial model to a heralded curve.

    Args:
        curve (:obj:`RadialCurve`): The heralded DAPS curve.
        k_h (:obj:`int`): Herald outcome, the polynomial degree.
        vacuum (:obj:`GaussPolyModel`, optional): The paired vacuum fit.
            Its decay rate starts the iteration.
        fix_decay (:obj:`bool`): Keep b at the vacuum value and solve for
            the f_j by linear least squares.

    """
    if k_h < 0:
        raise DapsValueError(f"Herald outcome must be >= 0, got {k_h}.")
    if k_h == 0 and not fix_decay:
        return fit_vacuum(curve)
    if len(curve) < k_h + 3:
        raise DapsValueError(
            f"A degree {k_h} fit needs >= {k_h + 3} points, got {len(curve)}."
        )
    x, y = curve.x, curve.means
    w = fit_weights(curve.deltas)
    if vacuum is not None:
        b0 = vacuum.b
    elif fix_decay:
        raise DapsValueError("A fixed decay needs the vacuum fit.")
    else:
        # The tail is dominated by the highest power, use it for a start.
        tail = slice(2 * len(x) // 3, None)
        _, b0 = _log_linear_guess(x[tail], np.abs(y[tail]) + 1e-300, w[tail])
    f = _linear_coefficients(x, y, w, k_h, b0)
    if fix_decay:
        resid = y - _design(x, k_h, b0) @ f
        design = np.sqrt(w)[:, None] * _design(x, k_h, b0)
        out = GaussPolyModel(
            b=b0,
            f=tuple(f),
            variable=curve.variable,
            z=curve.z,
            chi2=float(np.sum(w * resid ** 2)),
            covariance=np.linalg.pinv(design.T @ design),
        )
    else:
        model, jac = _poly_model(k_h)
        res = gauss_newton(model, jac, np.append(f, b0), x, y, w)
        out = GaussPolyModel(
            b=float(res.params[-1]),
            f=tuple(res.params[:-1]),
            variable=curve.variable,
            z=curve.z,
            chi2=res.chi2,
            covariance=res.covariance,
        )
    analysis_logger.info(
        "Heralded fit k_h=%d: b=%.6g, f=%s", k_h, out.b, [f"{v:.4g}" for v in out.f]
    )
    return out
