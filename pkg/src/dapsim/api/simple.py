"""The simple public API methods.

These wrap the core library the way the command line uses it: build an
experiment from config, simulate it, estimate a dataset and analyse one or
more datasets. Nothing here touches the filesystem except
:func:`load_experiment`, which reads config files.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from dapsim.core import DapsConfig, ExperimentConfig, TimingSummary
from dapsim.core.analysis import (
    CSV_COLUMNS,
    RadialCurve,
    compare_curves,
    curve_from_values,
    discrimination_matrix,
    estimate_curve,
    fit_heralded,
    fit_vacuum,
    optimal_z,
    predict_convolution,
    z_grid,
)
from dapsim.core.dataset import ScanDataset
from dapsim.core.errors import DapsDataError, DapsValueError
from dapsim.core.estimator import ScanEstimate, calibration_fit, estimate_scan
from dapsim.core.experiment import AnalysisOptions, EstimateOptions
from dapsim.core.fock.distribution import StateSpec
from dapsim.core.simulator import scan_experiment, scan_heralded

api_logger = logging.getLogger("dapsim.api")

ANALYSIS_MODES = ("fit", "predict", "discriminate", "optimal-z")

Table = Tuple[Sequence[str], List[Sequence]]


def load_experiment(
    config_path: Optional[str] = None,
    overrides: Optional[dict] = None,
    path: str = ".",
) -> ExperimentConfig:
    """Load and validate an experiment from the layered config.

    Args:
        config_path (:obj:`str`, optional): Explicit config file, applied
            on top of the config files discovered from `path`.
        overrides (:obj:`dict`, optional): Values which beat every file.
        path (:obj:`str`): Directory to discover config files from.

    """
    config = DapsConfig.from_path(
        path=path, extra_config_path=config_path, overrides=overrides
    )
    return ExperimentConfig.from_config(config)


def simulate(
    experiment: ExperimentConfig,
    timing: Optional[TimingSummary] = None,
    allow_process_parallelism: bool = True,
) -> Dict[str, ScanDataset]:
    """Simulate the scans of an experiment.

    Returns:
        :obj:`dict` of datasets. A plain run gives one dataset labelled
        `signal`, a heralded run one dataset per herald outcome k_h,
        labelled `kh<k_h>`.

    """
    common = dict(
        cfg=experiment.multiplex,
        lo_grid=experiment.lo_grid,
        trials=experiment.trials,
        seed=experiment.seed,
        processes=experiment.processes,
        allow_process_parallelism=allow_process_parallelism,
        timing=timing,
    )
    provenance = experiment.to_record()
    h = experiment.heralding
    if h is None:
        dataset = scan_experiment(experiment.state, **common)
        return {"signal": dataset.with_metadata(experiment=provenance)}
    heralded = scan_heralded(
        h.squeezing, h.transmittance, h.detector, h.khs, **common
    )
    return {
        f"kh{k_h}": dataset.with_metadata(experiment=provenance)
        for k_h, dataset in heralded.items()
    }


def estimate(
    dataset: ScanDataset,
    options: Optional[EstimateOptions] = None,
    seed: int = 0,
    vectors: Sequence[Sequence[float]] = (),
    with_di: Optional[bool] = None,
) -> ScanEstimate:
    """Estimate G_z, the eigenvalue witness, mu_min and |beta_DI| of a scan."""
    options = options or EstimateOptions()
    return estimate_scan(
        dataset,
        zs=options.zs,
        vectors=vectors,
        threshold=options.threshold,
        method=options.error_method,
        resamples=options.bootstrap_resamples,
        seed=seed,
        nominal_events=options.nominal_events,
        with_di=with_di,
    )


@dataclass
class AnalysisResult:
    """The JSON record of an analysis and the CSV tables it produced.

    Tables are keyed by a short name and hold (header, rows).
    """

    record: dict
    tables: Dict[str, Table] = field(default_factory=dict)


def _vacuum_scan(dataset: ScanDataset) -> ScanDataset:
    """The signal-blocked scan as a dataset of its own."""
    vacuum = dataset.require_vacuum()
    return ScanDataset(vacuum, vacuum, {"state": StateSpec.vacuum().to_record()})


def _fit_degree(dataset: ScanDataset) -> int:
    heralding = dataset.metadata.get("heralding")
    if heralding:
        return int(heralding["k_h"])
    state = dataset.metadata.get("state") or {}
    if state.get("variant") == "fock":
        return int(state["m"])
    return 0


def _curve_table(curve: RadialCurve) -> Table:
    return CSV_COLUMNS, curve.to_rows()


def _frontend(dataset: ScanDataset) -> Tuple[complex, complex]:
    try:
        frontend = dataset.metadata["frontend"]
        return complex(*frontend["t"]), complex(*frontend["r"])
    except (KeyError, TypeError) as err:
        raise DapsDataError(
            "Predictions need the beam splitter (t, r) in the dataset metadata."
        ) from err


def _labels(datasets: Sequence[ScanDataset], labels: Sequence[str]) -> List[str]:
    if labels:
        if len(labels) != len(datasets):
            raise DapsValueError(
                f"Got {len(labels)} labels for {len(datasets)} datasets."
            )
        return list(labels)
    return [f"dataset{i}" for i in range(len(datasets))]


def _analyze_fit(dataset, label, options, nominal_events):
    vac_curve = estimate_curve(
        _vacuum_scan(dataset), options.z, options.variable, nominal_events
    )
    vacuum = fit_vacuum(vac_curve)
    curve = estimate_curve(dataset, options.z, options.variable, nominal_events)
    degree = _fit_degree(dataset)
    model = fit_heralded(curve, degree, vacuum, options.fix_decay)
    fitted = curve_from_values(
        curve.x, model.evaluate(curve.x), curve.variable, curve.z, curve.settings
    )
    record = {
        "label": label,
        "degree": degree,
        "vacuum": vacuum.to_record(),
        "model": model.to_record(),
    }
    tables = {
        f"{label}_curve": _curve_table(curve),
        f"{label}_fit": _curve_table(fitted),
    }
    return record, tables


def _analyze_predict(dataset, label, options, nominal_events, state, x_max):
    if state is None:
        rec = dataset.metadata.get("state")
        state = (
            StateSpec.from_record(rec)
            if rec
            else StateSpec.fock(options.predict_photons)
        )
    t, r = _frontend(dataset)
    vacuum = fit_vacuum(
        estimate_curve(
            _vacuum_scan(dataset), options.z, options.variable, nominal_events
        )
    )
    scale = 1.0
    if options.variable == "di":
        scale = calibration_fit(dataset.require_vacuum(), nominal_events).slope
    estimated = estimate_curve(dataset, options.z, options.variable, nominal_events)
    predicted = predict_convolution(
        state,
        vacuum,
        t,
        r,
        estimated.x,
        scale=scale,
        order=options.quadrature_order,
        variable=estimated.variable,
        z=estimated.z,
        settings=estimated.settings,
    )
    comparison = compare_curves(predicted, estimated, x_max)
    record = {
        "label": label,
        "state": state.to_record(),
        "scale": scale,
        "vacuum": vacuum.to_record(),
        "comparison": comparison.to_record(),
    }
    tables = {
        f"{label}_predicted": _curve_table(predicted),
        f"{label}_estimated": _curve_table(estimated),
    }
    return record, tables


def analyze(
    datasets: Sequence[ScanDataset],
    mode: str,
    options: Optional[AnalysisOptions] = None,
    labels: Sequence[str] = (),
    nominal_events: float = 1e6,
    state: Optional[StateSpec] = None,
    x_max: Optional[float] = None,
) -> AnalysisResult:
    """Run one analysis mode over datasets.

    Args:
        datasets: The datasets, all on the same LO grid for `discriminate`.
        mode (:obj:`str`): One of `fit`, `predict`, `discriminate` or
            `optimal-z`.
        options (:obj:`AnalysisOptions`, optional): z, curve variable and
            mode specific settings.
        labels: One label per dataset, used in records and table names.
        nominal_events (:obj:`float`): Events assumed for exact tables.
        state (:obj:`StateSpec`, optional): The state to predict. By
            default the state stored with each dataset, else
            fock(`options.predict_photons`).
        x_max (:obj:`float`, optional): Largest abscissa compared in
            `predict` mode.

    Raises:
        DapsValueError: For an unknown mode or mismatched labels.
        DapsDataError: When datasets lack what the mode needs.
        DapsConvergenceError: When a fit or quadrature does not converge.

    """
    if mode not in ANALYSIS_MODES:
        raise DapsValueError(
            f"Unknown analysis mode {mode!r}, expected one of {ANALYSIS_MODES}."
        )
    if not datasets:
        raise DapsDataError("No datasets to analyse.")
    options = options or AnalysisOptions()
    names = _labels(datasets, labels)
    record: dict = {
        "kind": "analysis",
        "mode": mode,
        "z": options.z,
        "variable": options.variable,
    }
    tables: Dict[str, Table] = {}
    api_logger.info("Analysing %d dataset(s) in %s mode", len(datasets), mode)

    if mode == "discriminate":
        curves = [
            estimate_curve(d, options.z, options.variable, nominal_events)
            for d in datasets
        ]
        matrix = discrimination_matrix(curves, names)
        rows = matrix.to_rows()
        record["result"] = matrix.to_record()
        tables["discrimination"] = (rows[0], rows[1:])
        return AnalysisResult(record, tables)

    results = []
    for dataset, label in zip(datasets, names):
        if mode == "fit":
            res, tabs = _analyze_fit(dataset, label, options, nominal_events)
        elif mode == "predict":
            res, tabs = _analyze_predict(
                dataset, label, options, nominal_events, state, x_max
            )
        else:
            zs = z_grid(options.z_min, options.z_max, options.z_step)
            res = {"label": label, **optimal_z(dataset, zs, nominal_events).to_record()}
            tabs = {}
        results.append(res)
        tables.update(tabs)
    record["results"] = results
    return AnalysisResult(record, tables)
