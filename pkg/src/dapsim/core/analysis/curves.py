"""Radial DAPS curves: G_z against |beta|^2 or |beta_DI|^2."""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from dapsim.core.dataset import ScanDataset
from dapsim.core.errors import DapsDataError, DapsValueError
from dapsim.core.estimator import EstimateWithError, daps_gz, di_intensity

analysis_logger = logging.getLogger("dapsim.analysis")

VARIABLES = ("raw", "di")
CSV_COLUMNS = ("setting", "x", "mean", "sigma", "eps", "delta")


@dataclass(frozen=True)
class RadialCurve:
    """Estimates of G_z on a grid of LO intensities.

    Args:
        x: Abscissa, |beta|^2 for `raw` curves and |beta_DI|^2 for `di`.
        points: One estimate per abscissa value.
        variable (:obj:`str`): `raw` or `di`.
        z (:obj:`float`, optional): The z of G_z.
        settings: Setting index of each point.

    """

    x: np.ndarray
    points: Tuple[EstimateWithError, ...]
    variable: str = "di"
    z: Optional[float] = None
    settings: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "points", tuple(self.points))
        if self.variable not in VARIABLES:
            raise DapsValueError(
                f"Curve variable must be one of {VARIABLES}, got {self.variable!r}."
            )
        if x.ndim != 1 or x.size != len(self.points):
            raise DapsDataError("A curve needs exactly one estimate per abscissa.")
        if x.size and (np.any(x < 0) or np.any(np.diff(x) <= 0)):
            raise DapsDataError(
                "Curve abscissae must be nonnegative and strictly increasing."
            )
        settings = tuple(self.settings) or tuple(range(x.size))
        if len(settings) != x.size:
            raise DapsDataError("A curve needs one setting index per point.")
        object.__setattr__(self, "settings", settings)

    def __len__(self):
        return self.x.size

    @property
    def means(self) -> np.ndarray:
        """Point estimates."""
        return np.array([p.mean for p in self.points])

    @property
    def deltas(self) -> np.ndarray:
        """Combined errors."""
        return np.array([p.delta for p in self.points])

    def evaluate(self, x) -> np.ndarray:
        """Linear interpolation of the means, held constant beyond the grid."""
        return np.interp(np.asarray(x, dtype=float), self.x, self.means)

    def to_rows(self) -> List[tuple]:
        """Rows matching :data:`CSV_COLUMNS`."""
        return [
            (s, float(x), p.mean, p.sigma, p.eps, p.delta)
            for s, x, p in zip(self.settings, self.x, self.points)
        ]

    def to_record(self) -> dict:
        """Serialisable representation."""
        return {
            "kind": "curve",
            "variable": self.variable,
            "z": self.z,
            "points": [
                {"setting": s, "x": float(x), **p.to_record()}
                for s, x, p in zip(self.settings, self.x, self.points)
            ],
        }

    @classmethod
    def from_record(cls, rec: dict) -> "RadialCurve":
        """Rebuild from :meth:`to_record` output."""
        pts = rec["points"]
        return cls(
            x=np.array([p["x"] for p in pts], dtype=float),
            points=tuple(EstimateWithError.from_record(p) for p in pts),
            variable=rec.get("variable", "di"),
            z=rec.get("z"),
            settings=tuple(int(p["setting"]) for p in pts),
        )


def curve_from_values(
    x: Sequence[float],
    values: Sequence[float],
    variable: str = "di",
    z: Optional[float] = None,
    settings: Sequence[int] = (),
) -> RadialCurve:
    """A curve of error free values, e.g. a model prediction."""
    points = tuple(EstimateWithError(float(v), 0.0, 0.0, 0) for v in values)
    x = np.asarray(x, dtype=float)
    return RadialCurve(x, points, variable, z, tuple(settings))


def estimate_curve(
    dataset: ScanDataset,
    z: float,
    variable: str = "di",
    nominal_events: float = 1e6,
) -> RadialCurve:
    """G_z over the scan of a dataset.

    The `di` abscissa is the intensity measured on the paired vacuum scan.
    Values a hair below zero at a dark LO are read as zero.
    """
    if len(dataset) == 0:
        raise DapsDataError("Cannot build a curve from an empty scan.")
    if variable == "di":
        vacuum = dataset.require_vacuum()
        x = np.array(
            [max(di_intensity(v.counts(nominal_events)).mean, 0.0) for v in vacuum]
        )
    elif variable == "raw":
        x = dataset.intensities
    else:
        raise DapsValueError(
            f"Curve variable must be one of {VARIABLES}, got {variable!r}.",
            section="analysis",
            field="variable",
        )
    points = tuple(daps_gz(s.counts(nominal_events), z) for s in dataset.settings)
    return RadialCurve(
        x, points, variable, float(z), tuple(s.index for s in dataset.settings)
    )


def zero_crossing(curve: RadialCurve) -> Optional[float]:
    """First abscissa where the means change sign, linearly interpolated."""
    y = curve.means
    for i in range(len(y) - 1):
        if y[i] == 0:
            return float(curve.x[i])
        if y[i] * y[i + 1] < 0:
            x0, x1 = curve.x[i], curve.x[i + 1]
            return float(x0 - y[i] * (x1 - x0) / (y[i + 1] - y[i]))
    return None


def check_same_grid(curves: Sequence[RadialCurve]):
    """Raise unless all curves share settings and variable."""
    if not curves:
        raise DapsDataError("No curves given.")
    ref = curves[0]
    for c in curves[1:]:
        if c.settings != ref.settings:
            raise DapsDataError(
                f"Curves do not share the LO grid: settings {list(ref.settings)} "
                f"vs {list(c.settings)}."
            )
        if c.variable != ref.variable:
            raise DapsDataError(
                f"Cannot mix {ref.variable!r} and {c.variable!r} curves."
            )


@dataclass(frozen=True)
class CurveComparison:
    """Per-setting agreement between a predicted and an estimated curve."""

    settings: Tuple[int, ...]
    x: np.ndarray
    difference: np.ndarray
    z_scores: np.ndarray
    relative_linf: float

    def fraction_within(self, k: float = 3.0) -> float:
        """Share of settings whose |z-score| is at most k."""
        return float(np.mean(np.abs(self.z_scores) <= k))

    def to_record(self) -> dict:
        """Serialisable representation."""
        return {
            "kind": "comparison",
            "relative_linf": self.relative_linf,
            "fraction_within_3": self.fraction_within(3.0),
            "points": [
                {
                    "setting": s,
                    "x": float(x),
                    "difference": float(d),
                    "z_score": float(zs),
                }
                for s, x, d, zs in zip(
                    self.settings, self.x, self.difference, self.z_scores
                )
            ],
        }


def compare_curves(
    predicted: RadialCurve, estimated: RadialCurve, x_max: Optional[float] = None
) -> CurveComparison:
    """z-scores (estimated - predicted) / combined error at every setting.

    Settings beyond `x_max` are left out. A zero combined error gives an
    infinite z-score unless the difference is zero too.
    """
    check_same_grid([predicted, estimated])
    keep = np.ones(len(estimated), dtype=bool)
    if x_max is not None:
        keep = estimated.x <= x_max
    diff = (estimated.means - predicted.means)[keep]
    delta = np.hypot(estimated.deltas, predicted.deltas)[keep]
    safe = np.where(delta > 0, delta, 1.0)
    z_scores = np.where(delta > 0, diff / safe, np.where(diff == 0, 0.0, np.inf))
    scale = float(np.max(np.abs(estimated.means[keep]))) if keep.any() else 0.0
    rel = float(np.max(np.abs(diff)) / scale) if scale > 0 else 0.0
    settings = tuple(s for s, k in zip(estimated.settings, keep) if k)
    analysis_logger.info(
        "Curve comparison: relative Linf %.3g, %.1f%% within 3 sigma",
        rel,
        100.0 * float(np.mean(np.abs(z_scores) <= 3.0)) if z_scores.size else 100.0,
    )
    return CurveComparison(settings, estimated.x[keep], diff, z_scores, rel)
