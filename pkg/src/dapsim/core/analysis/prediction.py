"""Predict DAPS curves of arbitrary states from the vacuum curve.

Displacing the LO by the signal turns the DAPS distribution of a state
with P function P into a convolution of the vacuum distribution,

    G(beta) = int P(alpha) G_vac(beta - (t/r) alpha) d^2 alpha.

For Fock states P is a sum of derivatives of delta functions and the
convolution reduces to derivatives of G_vac, which for a Gaussian vacuum
curve are Laguerre polynomials:

    d^j/dbeta^j d^j/dbeta*^j exp(-c u) = j! (-c)^j L_j(c u) exp(-c u)

with u = |beta|^2.
"""

import logging
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.special import comb, eval_laguerre, factorial

from dapsim.core.analysis.curves import RadialCurve, curve_from_values
from dapsim.core.analysis.fitting import GaussPolyModel
from dapsim.core.errors import DapsConvergenceError, DapsValueError
from dapsim.core.fock.distribution import StateSpec

analysis_logger = logging.getLogger("dapsim.analysis")

DEFAULT_ORDER = 64
QUADRATURE_TOLERANCE = 1e-6
# exp(-40) is far below the quadrature tolerance.
THERMAL_CUTOFF = 40.0
THERMAL_PANELS = 4

VacuumCurve = Union[GaussPolyModel, RadialCurve, Callable[[np.ndarray], np.ndarray]]


def laguerre_derivative(j: int, c: float, intensity) -> np.ndarray:
    """j-th mixed derivative of exp(-c|beta|^2) at |beta|^2 = intensity."""
    u = c * np.asarray(intensity, dtype=float)
    return factorial(j) * (-c) ** j * eval_laguerre(j, u) * np.exp(-u)


def _ratio(t: complex, r: complex) -> float:
    if abs(r) == 0:
        raise DapsValueError("The LO reflectance |r|^2 must be positive.")
    return abs(t) ** 2 / abs(r) ** 2


def predict_fock(
    m: int, vacuum: GaussPolyModel, t: complex, r: complex, scale: float = 1.0
) -> GaussPolyModel:
    """The Fock state |m> from a Gaussian vacuum model.

    Args:
        m (:obj:`int`): Photon number.
        vacuum (:obj:`GaussPolyModel`): Degree zero vacuum fit.
        t (:obj:`complex`): Signal transmission of the front end.
        r (:obj:`complex`): LO reflection of the front end.
        scale (:obj:`float`): Abscissa units per unit |beta|^2, i.e. the
            vacuum calibration slope for `di` curves and 1 for `raw` ones.

    Returns:
        :obj:`GaussPolyModel` of degree m with the vacuum decay rate.

    """
    if m < 0:
        raise DapsValueError(f"Photon number must be >= 0, got {m}.")
    if vacuum.degree != 0:
        raise DapsValueError(
            "Fock predictions need a Gaussian vacuum model, got degree "
            f"{vacuum.degree}."
        )
    if m == 0:
        return vacuum
    if not scale > 0:
        raise DapsValueError(f"Abscissa scale must be positive, got {scale}.")
    b, f0 = vacuum.b, vacuum.f[0]
    # In |beta| units the vacuum decays as exp(-c |beta|^2).
    c = b * scale
    lam = _ratio(t, r) * c
    f = np.zeros(m + 1)
    for j in range(m + 1):
        weight = comb(m, j, exact=True) * (-lam) ** j
        for k in range(j + 1):
            # L_j(u) = sum_k (-1)^k C(j, k) u^k / k!, with u = b x.
            term = (-1) ** k * comb(j, k, exact=True) * b ** k / factorial(k)
            f[k] += weight * term
    return GaussPolyModel(b=b, f=tuple(f0 * f), variable=vacuum.variable, z=vacuum.z)


def _vacuum_function(vacuum: VacuumCurve) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(vacuum, (GaussPolyModel, RadialCurve)):
        return vacuum.evaluate
    return vacuum


def _ring_average(
    vac, intensity: np.ndarray, radius: float, order: int
) -> np.ndarray:
    """Average of vac(|beta - radius e^{i phi}|^2) over phi."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    # The integrand is even in phi, so [0, pi] suffices.
    phi = 0.5 * np.pi * (nodes + 1.0)
    rho = np.sqrt(intensity)[:, None]
    shifted = rho ** 2 + radius ** 2 - 2.0 * rho * radius * np.cos(phi)[None, :]
    return 0.5 * (vac(np.clip(shifted, 0.0, None)) @ weights)


def _convolve(
    state: StateSpec, vac, intensity: np.ndarray, ratio: float, order: int
) -> np.ndarray:
    if state.variant == "vacuum":
        return vac(intensity)
    if state.variant == "coherent":
        return _ring_average(vac, intensity, ratio * abs(state.alpha), order)
    if state.variant == "thermal":
        if state.nbar == 0:
            return vac(intensity)
        nodes, weights = np.polynomial.legendre.leggauss(order)
        # u = |alpha|^2 / nbar carries the density exp(-u) du.
        half = 0.5 * THERMAL_CUTOFF / THERMAL_PANELS
        lows = 2.0 * half * np.arange(THERMAL_PANELS)
        u = (lows[:, None] + half * (nodes + 1.0)[None, :]).reshape(-1)
        w = half * np.tile(weights, THERMAL_PANELS) * np.exp(-u)
        radii = ratio * np.sqrt(state.nbar * u)
        rings = np.array([_ring_average(vac, intensity, a, order) for a in radii])
        return w @ rings
    raise DapsValueError(
        f"No convolution rule for {state.describe()}; Fock parts need a "
        "Gaussian vacuum model."
    )


def _check_symmetric(state: StateSpec):
    if not state.is_rotationally_symmetric:
        raise DapsValueError(
            f"{state.describe()} is not phase insensitive, the radial "
            "prediction does not apply."
        )


def predict_values(
    state: StateSpec,
    vacuum: VacuumCurve,
    t: complex,
    r: complex,
    x,
    scale: float = 1.0,
    order: int = DEFAULT_ORDER,
) -> np.ndarray:
    """Predicted DAPS values of `state` at abscissae x.

    Mixtures are predicted component by component. Fock components use
    :func:`predict_fock` and need a Gaussian vacuum model, classical
    components are convolved numerically.
    """
    _check_symmetric(state)
    x = np.asarray(x, dtype=float)
    if state.variant == "mixture":
        return sum(
            w * predict_values(s, vacuum, t, r, x, scale, order)
            for w, s in state.components
        )
    if state.variant == "fock":
        if not isinstance(vacuum, GaussPolyModel):
            raise DapsValueError(
                "Fock predictions need a fitted Gaussian vacuum model, not a "
                "tabulated curve."
            )
        return predict_fock(state.m, vacuum, t, r, scale).evaluate(x)
    vac = _vacuum_function(vacuum)

    def vac_raw(intensity):
        return vac(scale * intensity)

    return _convolve(state, vac_raw, x / scale, np.sqrt(_ratio(t, r)), order)


def predict_convolution(
    state: StateSpec,
    vacuum: VacuumCurve,
    t: complex,
    r: complex,
    x,
    scale: float = 1.0,
    order: int = DEFAULT_ORDER,
    variable: Optional[str] = None,
    z: Optional[float] = None,
    settings: Sequence[int] = (),
) -> RadialCurve:
    """Predicted curve of a phase-insensitive state on the grid x.

    The quadrature is repeated at twice the order and the finer result
    returned. Disagreement beyond the tolerance is a convergence failure.

    Raises:
        DapsConvergenceError: The two quadrature orders disagree.

    """
    if order < 4:
        raise DapsValueError(f"Quadrature order must be >= 4, got {order}.")
    check = predict_values(state, vacuum, t, r, x, scale, order)
    values = predict_values(state, vacuum, t, r, x, scale, 2 * order)
    err = float(np.max(np.abs(values - check))) if np.size(values) else 0.0
    if err > QUADRATURE_TOLERANCE * max(1.0, float(np.max(np.abs(values)))):
        raise DapsConvergenceError(
            f"Quadrature orders {order} and {2 * order} differ by {err:.2g} for "
            f"{state.describe()}; raise the order.",
            iterations=order,
        )
    analysis_logger.debug(
        "Predicted %s on %d points (quadrature check %.2g)",
        state.describe(),
        np.size(values),
        err,
    )
    if variable is None:
        variable = getattr(vacuum, "variable", "di")
    if z is None:
        z = getattr(vacuum, "z", None)
    return curve_from_values(x, values, variable, z, settings)
