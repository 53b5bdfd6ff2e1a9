"""Vacuum-anchored modelling of DAPS curves."""

# flake8: noqa: F401

from dapsim.core.analysis.curves import (
    CSV_COLUMNS,
    CurveComparison,
    RadialCurve,
    check_same_grid,
    compare_curves,
    curve_from_values,
    estimate_curve,
    zero_crossing,
)
from dapsim.core.analysis.discrimination import (
    DiscriminationMatrix,
    discrimination_matrix,
    discrimination_probability,
)
from dapsim.core.analysis.fitting import (
    FitResult,
    GaussPolyModel,
    fit_heralded,
    fit_vacuum,
    fit_weights,
    gauss_newton,
)
from dapsim.core.analysis.optimal import OptimalZ, optimal_z, z_grid
from dapsim.core.analysis.prediction import (
    laguerre_derivative,
    predict_convolution,
    predict_fock,
    predict_values,
)
