"""Search for the z giving the most significant negativity at beta = 0."""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from dapsim.core.dataset import ScanDataset
from dapsim.core.errors import DapsValueError
from dapsim.core.estimator import EstimateWithError, daps_gz

analysis_logger = logging.getLogger("dapsim.analysis")


def z_grid(z_min: float = -10.0, z_max: float = 0.0, step: float = 0.05) -> np.ndarray:
    """Equidistant z values from z_min to z_max inclusive."""
    if not step > 0 or z_max < z_min:
        raise DapsValueError(
            f"Bad z grid [{z_min}, {z_max}] with step {step}.",
            section="analysis",
            field="z_step",
        )
    n = int(round((z_max - z_min) / step)) + 1
    return np.linspace(z_min, z_min + (n - 1) * step, n)


@dataclass(frozen=True)
class OptimalZ:
    """The best z on a grid and the matching G_z(0)."""

    z: float
    estimate: EstimateWithError
    significance: float
    negative: bool
    onset_z: Optional[float]

    def to_record(self) -> dict:
        """Serialisable representation."""
        return {
            "kind": "optimal_z",
            "z": self.z,
            "estimate": self.estimate.to_record(),
            "significance": self.significance,
            "negative": self.negative,
            "onset_z": self.onset_z,
        }


def _significance(est: EstimateWithError) -> float:
    if est.delta == 0:
        return math.inf if est.mean < 0 else (0.0 if est.mean == 0 else -math.inf)
    return -est.mean / est.delta


def optimal_z(
    dataset: ScanDataset,
    zs: Optional[Sequence[float]] = None,
    nominal_events: float = 1e6,
) -> OptimalZ:
    """Maximise -G_z(0) / Delta G_z(0) over a z grid.

    The onset is the largest grid z at which G_z(0) is negative. When no
    z gives a negative value the best significance is still returned,
    with `negative` unset.
    """
    zs = z_grid() if zs is None else np.asarray(zs, dtype=float)
    if zs.size == 0:
        raise DapsValueError("Empty z grid.", section="analysis", field="z_min")
    counts = dataset.zero_setting().counts(nominal_events)
    estimates = [daps_gz(counts, float(z)) for z in zs]
    sig = np.array([_significance(e) for e in estimates])
    best = int(np.argmax(sig))
    negatives = [float(z) for z, e in zip(zs, estimates) if e.mean < 0]
    out = OptimalZ(
        z=float(zs[best]),
        estimate=estimates[best],
        significance=float(sig[best]),
        negative=estimates[best].mean < 0,
        onset_z=max(negatives) if negatives else None,
    )
    if not out.negative:
        analysis_logger.warning(
            "No negative G_z(0) on the z grid [%g, %g].", zs.min(), zs.max()
        )
    else:
        analysis_logger.info(
            "Optimal z=%g: G_z(0) = %s (%.3g sigma), onset z=%s",
            out.z,
            out.estimate,
            out.significance,
            out.onset_z,
        )
    return out
