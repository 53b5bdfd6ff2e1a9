"""Detector-independent LO amplitude and the photocounting correspondence.

With the signal blocked every click comes from the LO, so the mean number
of clicks summed over detectors, sum_i i <N_i>, is an intensity measured in
the detectors' own units. For linear detectors it equals eta |r|^2 |beta|^2.
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from dapsim.core.dataset import CoincidenceCounts, ScanSetting
from dapsim.core.errors import DapsDataError, DapsValueError
from dapsim.core.estimator.estimate import EstimateWithError, estimate

estimator_logger = logging.getLogger("dapsim.estimator")


def _total_clicks(tuples: np.ndarray) -> np.ndarray:
    return tuples.sum(axis=1)


def di_intensity(vacuum: CoincidenceCounts) -> EstimateWithError:
    """|beta_DI|^2 = sum_i i <N_i> with its errors."""
    return estimate(_total_clicks, vacuum)


def di_amplitude(vacuum: CoincidenceCounts) -> float:
    """|beta_DI|, the square root of :func:`di_intensity`.

    Round-off can push the intensity of a dark LO marginally below zero,
    which is read as zero.
    """
    return math.sqrt(max(di_intensity(vacuum).mean, 0.0))


@dataclass(frozen=True)
class CalibrationFit:
    """Straight line fits of |beta_DI|^2 against the LO settings."""

    slope: float
    intercept: float
    residual: float
    slope_index: float
    intercept_index: float
    residual_index: float

    def to_record(self) -> dict:
        """Serialisable representation."""
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "residual": self.residual,
            "slope_index": self.slope_index,
            "intercept_index": self.intercept_index,
            "residual_index": self.residual_index,
        }


def _line(x: np.ndarray, y: np.ndarray):
    design = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = float(np.max(np.abs(design @ np.array([slope, intercept]) - y)))
    return float(slope), float(intercept), residual


def calibration_fit(
    vacuum: Sequence[ScanSetting], nominal_events: float = 1e6
) -> CalibrationFit:
    """Linearity of the measured intensity in |beta|^2 and in setting index.

    Residuals are the largest absolute deviation from the fitted line.
    """
    if len(vacuum) < 2:
        raise DapsDataError("A calibration fit needs at least two vacuum settings.")
    y = np.array([di_intensity(s.counts(nominal_events)).mean for s in vacuum])
    intensity = np.array([s.intensity for s in vacuum])
    index = np.array([s.index for s in vacuum], dtype=float)
    slope, intercept, residual = _line(intensity, y)
    slope_i, intercept_i, residual_i = _line(index, y)
    estimator_logger.info(
        "Calibration: |beta_DI|^2 = %.6g |beta|^2 + %.3g (max residual %.2g)",
        slope,
        intercept,
        residual,
    )
    return CalibrationFit(slope, intercept, residual, slope_i, intercept_i, residual_i)


def s_parameter(z: float, eta_eff: float) -> float:
    """Ordering parameter s = 1 - 2 / (eta_eff (1 - z)) matching G_z."""
    if eta_eff <= 0:
        raise DapsValueError(f"Effective efficiency must be positive, got {eta_eff}.")
    if z == 1:
        raise DapsValueError("z = 1 is the normalisation and has no ordering.")
    return 1.0 - 2.0 / (eta_eff * (1.0 - z))


def z_for_s(s: float, eta_eff: float) -> float:
    """Inverse of :func:`s_parameter`."""
    if eta_eff <= 0:
        raise DapsValueError(f"Effective efficiency must be positive, got {eta_eff}.")
    if s == 1:
        raise DapsValueError("s = 1 (normal ordering) is only reached as z -> -inf.")
    return 1.0 - 2.0 / (eta_eff * (1.0 - s))
