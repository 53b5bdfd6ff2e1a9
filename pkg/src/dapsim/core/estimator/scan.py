"""Estimate every witness at every setting of a scan."""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from dapsim.core.dataset import ScanDataset
from dapsim.core.errors import DapsDataError, DapsValueError
from dapsim.core.estimator.amplitude import di_intensity
from dapsim.core.estimator.estimate import (
    ERROR_METHODS,
    EstimateWithError,
    daps_gz,
    generating_function,
)
from dapsim.core.estimator.nonclassicality import (
    DEFAULT_NOMINAL_EVENTS,
    DEFAULT_RESAMPLES,
    EigenWitness,
    g_min_scan,
    multinomial_test,
)

estimator_logger = logging.getLogger("dapsim.estimator")


@dataclass
class SettingEstimate:
    """All estimates at one LO setting."""

    index: int
    beta: complex
    gz: Dict[float, EstimateWithError] = field(default_factory=dict)
    vectors: List[EstimateWithError] = field(default_factory=list)
    eigen: Optional[EigenWitness] = None
    mu_min: Optional[EstimateWithError] = None
    di_intensity: Optional[EstimateWithError] = None

    def to_record(self) -> dict:
        """Serialisable representation."""
        rec: dict = {
            "index": self.index,
            "beta": [self.beta.real, self.beta.imag],
            "gz": [{"z": z, **est.to_record()} for z, est in self.gz.items()],
        }
        if self.vectors:
            rec["vectors"] = [est.to_record() for est in self.vectors]
        if self.eigen is not None:
            rec["g_eigen"] = self.eigen.g.to_record()
            rec["z_star"] = [float(v) for v in self.eigen.z]
        if self.mu_min is not None:
            rec["mu_min"] = self.mu_min.to_record()
        if self.di_intensity is not None:
            rec["di_intensity"] = self.di_intensity.to_record()
        return rec


@dataclass
class ScanEstimate:
    """Per-setting estimates and the scan-wide minima."""

    settings: List[SettingEstimate]
    zs: List[float]
    threshold: float
    g_min: Optional[EigenWitness] = None
    mu_min: Optional[EstimateWithError] = None
    mu_min_index: Optional[int] = None
    metadata: dict = field(default_factory=dict)

    @property
    def g_nonclassical(self) -> bool:
        """g_min is negative by at least `threshold` errors."""
        return self.g_min is not None and self.g_min.g.is_negative(self.threshold)

    @property
    def mu_nonclassical(self) -> bool:
        """mu_min is negative by at least `threshold` errors."""
        return self.mu_min is not None and self.mu_min.is_negative(self.threshold)

    def curve_points(self, z: float):
        """(setting, G_z) pairs for one of the estimated z values."""
        if z not in self.zs:
            raise DapsValueError(f"z={z} was not estimated, have {self.zs}.")
        return [(s, s.gz[z]) for s in self.settings]

    def summary(self) -> dict:
        """The scan-wide verdicts."""
        out: dict = {"threshold": self.threshold}
        if self.g_min is not None:
            out["g_min"] = {
                **self.g_min.g.to_record(),
                "index": self.g_min.index,
                "beta": [self.g_min.beta.real, self.g_min.beta.imag],
                "z_star": [float(v) for v in self.g_min.z],
                "nonclassical": self.g_nonclassical,
            }
        if self.mu_min is not None:
            out["mu_min"] = {
                **self.mu_min.to_record(),
                "index": self.mu_min_index,
                "nonclassical": self.mu_nonclassical,
            }
        return out

    def to_record(self) -> dict:
        """Serialisable representation."""
        return {
            "kind": "estimate",
            "zs": list(self.zs),
            "summary": self.summary(),
            "settings": [s.to_record() for s in self.settings],
            "metadata": self.metadata,
        }


def estimate_scan(
    dataset: ScanDataset,
    zs: Sequence[float] = (-1.5, 0.0, 0.5, 1.0),
    vectors: Sequence[Sequence[float]] = (),
    threshold: float = 3.0,
    method: str = "propagation",
    resamples: int = DEFAULT_RESAMPLES,
    seed: int = 0,
    nominal_events: float = DEFAULT_NOMINAL_EVENTS,
    with_di: Optional[bool] = None,
) -> ScanEstimate:
    """Run the estimator over a whole scan.

    Args:
        dataset (:obj:`ScanDataset`): The scan.
        zs: z values for G_z.
        vectors: Extra weight vectors Z for g_Z.
        threshold (:obj:`float`): Significance needed to flag negativity.
        method (:obj:`str`): Error method for the eigenvalue witness.
        resamples (:obj:`int`): Bootstrap resamples.
        seed (:obj:`int`): Bootstrap seed.
        nominal_events (:obj:`float`): Events assumed for exact tables.
        with_di (:obj:`bool`, optional): Estimate |beta_DI|^2. By default
            only when the dataset has a vacuum scan, True makes a missing
            vacuum scan an error.

    """
    if len(dataset) == 0:
        raise DapsDataError("Cannot estimate an empty scan.")
    if method not in ERROR_METHODS:
        raise DapsValueError(
            f"Unknown error method {method!r}, expected one of {ERROR_METHODS}.",
            section="estimate",
            field="error_method",
        )
    if with_di is None:
        with_di = dataset.vacuum is not None
    vacuum = dataset.require_vacuum() if with_di else None
    zs = [float(z) for z in zs]
    gmin = (
        g_min_scan(dataset, nominal_events, method, resamples, seed)
        if dataset.N == 2
        else None
    )
    results = []
    for pos, s in enumerate(dataset.settings):
        counts = s.counts(nominal_events)
        res = SettingEstimate(index=s.index, beta=s.beta)
        res.gz = {z: daps_gz(counts, z) for z in zs}
        res.vectors = [generating_function(counts, np.asarray(v)) for v in vectors]
        if gmin is not None:
            res.eigen = gmin.per_setting[pos]
        if dataset.N >= 2:
            res.mu_min = multinomial_test(counts).mu_min
        if vacuum is not None:
            res.di_intensity = di_intensity(vacuum[pos].counts(nominal_events))
        results.append(res)
    out = ScanEstimate(
        settings=results,
        zs=zs,
        threshold=threshold,
        metadata=dict(dataset.metadata),
    )
    if gmin is not None:
        out.g_min = EigenWitness(gmin.g_min, gmin.z, gmin.index, gmin.beta)
    mus = [r for r in results if r.mu_min is not None]
    if mus:
        best = min(mus, key=lambda r: r.mu_min.mean)  # type: ignore
        out.mu_min, out.mu_min_index = best.mu_min, best.index
    estimator_logger.info(
        "Estimated %d settings: g_min %s, mu_min %s",
        len(results),
        out.g_min.g if out.g_min else "n/a",
        out.mu_min if out.mu_min else "n/a",
    )
    for name, flagged, est in (
        ("g_min", out.g_nonclassical, out.g_min.g if out.g_min else None),
        ("mu_min", out.mu_nonclassical, out.mu_min),
    ):
        if est is not None and est.mean < 0 and not flagged:
            estimator_logger.warning(
                "%s = %s is negative but below the %.3g sigma threshold.",
                name,
                est,
                threshold,
            )
    return out
