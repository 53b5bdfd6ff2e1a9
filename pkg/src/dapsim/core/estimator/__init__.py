"""Estimation of DAPS values and nonclassicality witnesses from counts.

Everything here works on coincidence counts alone. Nothing in this package
imports a detector model or the simulator.
"""

# flake8: noqa: F401

from dapsim.core.estimator.amplitude import (
    CalibrationFit,
    calibration_fit,
    di_amplitude,
    di_intensity,
    s_parameter,
    z_for_s,
)
from dapsim.core.estimator.counts import detector_counts, functional_values, symmetrize
from dapsim.core.estimator.estimate import (
    EstimateWithError,
    daps_gz,
    estimate,
    generating_function,
    gz_weights,
    product_functional,
)
from dapsim.core.estimator.nonclassicality import (
    EigenWitness,
    GMinResult,
    MultinomialMatrix,
    bootstrap_eigen_min,
    coincidence_matrix,
    eigen_witness,
    g_min_scan,
    multinomial_matrix,
    multinomial_test,
    mu_min_scan,
)
from dapsim.core.estimator.scan import ScanEstimate, SettingEstimate, estimate_scan
