"""The validated experiment built from a :obj:`DapsConfig`."""

import logging
from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from dapsim.core.config import DapsConfig, split_comma_separated
from dapsim.core.config_info import get_config_info
from dapsim.core.detectors import DetectorModel, detector_from_section
from dapsim.core.errors import DapsConfigError, DapsValueError
from dapsim.core.fock.distribution import StateSpec
from dapsim.core.fock.frontend import FrontendConfig, suggest_truncation
from dapsim.core.simulator.heralding import pdc_truncation
from dapsim.core.simulator.multiplex import ImbalanceConfig, MultiplexConfig
from dapsim.core.simulator.scan import SCHEMA_VERSION, lo_grid_from_intensities

config_logger = logging.getLogger("dapsim.config")


@dataclass(frozen=True)
class HeraldingConfig:
    """Heralded PDC source: squeezing, idler arm and herald outcomes."""

    squeezing: float
    transmittance: float
    detector: DetectorModel
    khs: Tuple[int, ...]

    def to_record(self) -> dict:
        """Serialisable representation."""
        return {
            "squeezing": self.squeezing,
            "transmittance": self.transmittance,
            "detector": self.detector.to_record(),
            "khs": list(self.khs),
        }


@dataclass(frozen=True)
class EstimateOptions:
    """Settings of the `estimate` step."""

    zs: Tuple[float, ...] = (-1.5, 0.0, 0.5, 1.0)
    threshold: float = 3.0
    error_method: str = "propagation"
    bootstrap_resamples: int = 200
    nominal_events: float = 1e6

    @classmethod
    def from_config(cls, config: DapsConfig) -> "EstimateOptions":
        """Read and validate the `[dapsim:estimate]` section on its own."""
        validate_config(config, sections=("estimate",))
        return cls(
            zs=tuple(_number_list(config, "zs", "estimate")),
            threshold=_require(config, "threshold", "estimate"),
            error_method=config.get("error_method", section="estimate"),
            bootstrap_resamples=_require(
                config, "bootstrap_resamples", "estimate", int
            ),
            nominal_events=_require(config, "nominal_events", "estimate"),
        )


@dataclass(frozen=True)
class AnalysisOptions:
    """Settings of the `analyze` step."""

    z: float = -1.5
    variable: str = "di"
    fix_decay: bool = False
    z_min: float = -10.0
    z_max: float = 0.0
    z_step: float = 0.05
    quadrature_order: int = 64
    predict_photons: int = 1

    @classmethod
    def from_config(cls, config: DapsConfig) -> "AnalysisOptions":
        """Read and validate the `[dapsim:analysis]` section on its own."""
        validate_config(config, sections=("analysis",))
        return cls(
            z=_require(config, "z", "analysis"),
            variable=config.get("variable", section="analysis"),
            fix_decay=bool(config.get("fix_decay", section="analysis")),
            z_min=_require(config, "z_min", "analysis"),
            z_max=_require(config, "z_max", "analysis"),
            z_step=_require(config, "z_step", "analysis"),
            quadrature_order=_require(config, "quadrature_order", "analysis", int),
            predict_photons=_require(config, "predict_photons", "analysis", int),
        )


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to simulate, estimate and analyse one experiment.

    Build it with :meth:`from_config`, which validates every value
    against the config info and the component invariants.
    """

    state: StateSpec
    multiplex: MultiplexConfig
    lo_grid: np.ndarray
    trials: Optional[int]
    seed: int
    processes: int = 1
    heralding: Optional[HeraldingConfig] = None
    estimate: EstimateOptions = field(default_factory=EstimateOptions)
    analysis: AnalysisOptions = field(default_factory=AnalysisOptions)
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def from_config(cls, config: DapsConfig) -> "ExperimentConfig":
        """Validate a config and build the experiment.

        Raises:
            DapsConfigError: For values failing validation, with the
                offending section and field.
            DapsTruncationError: If no truncation meets the tail bound.

        """
        validate_config(config)
        try:
            return _build(config)
        except DapsConfigError:
            raise
        except DapsValueError as err:
            raise DapsConfigError(
                str(err.desc()), section=err.section, field=err.field
            ) from err

    @property
    def frontend(self) -> FrontendConfig:
        """The beam splitter configuration."""
        return self.multiplex.frontend

    def to_record(self) -> dict:
        """Serialisable summary, stored in dataset metadata."""
        rec: dict = {
            "schema_version": self.schema_version,
            "state": self.state.to_record(),
            "transmittance": self.frontend.transmittance,
            "n_max": self.frontend.n_max,
            "detector": self.multiplex.detector.to_record(),
            "depth": self.multiplex.S,
            "lo_intensities": [float(b) ** 2 for b in self.lo_grid],
            "trials": self.trials,
            "seed": self.seed,
        }
        if self.heralding is not None:
            rec["heralding"] = self.heralding.to_record()
        return rec


def validate_config(config: DapsConfig, sections: Optional[Sequence[str]] = None):
    """Check documented values against their validation rule.

    Args:
        config (:obj:`DapsConfig`): The config to check.
        sections: Only check these sections, all of them by default.

    """
    for key, info in get_config_info().items():
        if "validation" not in info:
            continue
        section, name = key.split(":", 1)
        if sections is not None and section not in sections:
            continue
        val = config.get(name, section=section)
        if val is None:
            continue
        if val not in info["validation"]:
            raise DapsConfigError(
                f"Invalid value {val!r} for {name!r} in [{section}]: "
                f"{info['definition']}",
                section=section,
                field=name,
            )


def _require(config: DapsConfig, name: str, section: str, kind=float) -> Any:
    val = config.get(name, section=section)
    try:
        if kind is int and (isinstance(val, bool) or int(val) != val):
            raise TypeError
        return kind(val)
    except (TypeError, ValueError):
        raise DapsConfigError(
            f"{name!r} in [{section}] must be {kind.__name__}, got {val!r}.",
            section=section,
            field=name,
        )


def _number_list(config: DapsConfig, name: str, section: str, kind=float) -> List:
    raw = config.get(name, section=section)
    try:
        return [kind(v) for v in split_comma_separated(raw)]
    except (TypeError, ValueError):
        raise DapsConfigError(
            f"{name!r} in [{section}] must be a comma separated list of numbers.",
            section=section,
            field=name,
        )


def build_state(config: DapsConfig) -> StateSpec:
    """The signal state described by the `[dapsim:state]` section."""
    kind = config.get("kind", section="state", default="fock")
    if kind == "vacuum":
        return StateSpec.vacuum()
    if kind == "fock":
        return StateSpec.fock(_require(config, "m", "state", int))
    if kind == "coherent":
        alpha = _require(config, "alpha", "state", complex)
        randomized = bool(config.get("phase_randomized", section="state"))
        return StateSpec.coherent(alpha, randomized)
    if kind == "thermal":
        return StateSpec.thermal(_require(config, "nbar", "state"))
    if kind == "fock_mixture":
        weights = _number_list(config, "fock_weights", "state")
        if not weights or any(w < 0 for w in weights) or sum(weights) <= 0:
            raise DapsConfigError(
                "`fock_mixture` needs nonnegative fock_weights with a positive sum.",
                section="state",
                field="fock_weights",
            )
        return StateSpec.fock_mixture(weights)
    raise DapsConfigError(
        f"Unknown state kind {kind!r}.", section="state", field="kind"
    )


def _imbalance(config: DapsConfig) -> Optional[ImbalanceConfig]:
    if not config.get("enabled", section="imbalance"):
        return None
    weights = _number_list(config, "weights", "imbalance") or None
    scales = _number_list(config, "eta_scale", "imbalance") or None
    return ImbalanceConfig(
        weights=tuple(weights) if weights else None,
        eta_scale=tuple(scales) if scales else None,
    )


def _heralding(config: DapsConfig) -> Optional[HeraldingConfig]:
    if not config.get("enabled", section="heralding"):
        return None
    section = config.get_section(["heralding", "detector"])
    if not isinstance(section, dict):
        section = config.get_section("detector")
    khs = _number_list(config, "khs", "heralding", int)
    if not khs:
        raise DapsConfigError(
            "Heralding needs at least one outcome in khs.",
            section="heralding",
            field="khs",
        )
    return HeraldingConfig(
        squeezing=_require(config, "squeezing", "heralding"),
        transmittance=_require(config, "transmittance", "heralding"),
        detector=detector_from_section(section or {}),
        khs=tuple(khs),
    )


def _build(config: DapsConfig) -> ExperimentConfig:
    seed = _require(config, "seed", "core", int)
    if seed < 0:
        raise DapsConfigError("The seed must be >= 0.", section="core", field="seed")
    state = build_state(config)
    heralding = _heralding(config)
    intensities = _number_list(config, "intensities", "scan") or None
    lo_grid = lo_grid_from_intensities(
        max_intensity=_require(config, "max_intensity", "scan"),
        settings=_require(config, "settings", "scan", int),
        intensities=intensities,
    )
    transmittance = _require(config, "transmittance", "frontend")
    if not 0.0 <= transmittance <= 1.0:
        raise DapsConfigError(
            f"Transmittance must lie in [0, 1], got {transmittance!r}.",
            section="frontend",
            field="transmittance",
        )
    n_max: Any = config.get("n_max")
    if n_max == "auto" or n_max is None:
        # The heralded state is not known before the detector is built, the
        # pair-number truncation bounds its photon number.
        proxy = (
            StateSpec.fock(pdc_truncation(heralding.squeezing))
            if heralding is not None
            else state
        )
        n_max = suggest_truncation(proxy, transmittance, float(np.max(lo_grid)))
    else:
        n_max = _require(config, "n_max", "core", int)
    frontend = FrontendConfig.from_transmittance(transmittance, n_max)
    multiplex = MultiplexConfig(
        S=_require(config, "depth", "multiplex", int),
        frontend=frontend,
        detector=detector_from_section(config.get_section("detector") or {}),
        imbalance=_imbalance(config),
    )
    trials = None
    if config.get("sample", section="scan"):
        trials = _require(config, "trials", "scan", int)
        if trials < 1:
            raise DapsConfigError(
                "Sampling needs trials >= 1.", section="scan", field="trials"
            )
    out = ExperimentConfig(
        state=state,
        multiplex=multiplex,
        lo_grid=lo_grid,
        trials=trials,
        seed=seed,
        processes=_require(config, "processes", "core", int),
        heralding=heralding,
        estimate=EstimateOptions.from_config(config),
        analysis=AnalysisOptions.from_config(config),
        schema_version=_require(config, "schema_version", "core", int),
    )
    config_logger.info(
        "Experiment: %s, N=%d, K=%d, n_max=%d, %d settings, trials=%s",
        state.describe() if heralding is None else "heralded PDC",
        multiplex.N,
        multiplex.K,
        n_max,
        len(lo_grid),
        trials,
    )
    return out
