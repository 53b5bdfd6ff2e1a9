"""LO scans: exact tables and sampled events for every setting.

Each scan is run twice, once with the signal and once with the signal
blocked, on the same LO grid. The LO phase is fixed at zero.
"""

import functools
import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from dapsim.core.dataset import ClickTable, ScanDataset, ScanSetting
from dapsim.core.errors import DapsBaseError, DapsValueError
from dapsim.core.fock.distribution import StateSpec
from dapsim.core.fock.frontend import frontend_distribution
from dapsim.core.seeding import HERALD_STREAM_BASE, SIGNAL_STREAM, VACUUM_STREAM
from dapsim.core.simulator.heralding import HeraldedState, heralded_pdc_state
from dapsim.core.simulator.multiplex import MultiplexConfig, multiplexed_statistics
from dapsim.core.simulator.runner import get_runner
from dapsim.core.simulator.sampling import sample_events
from dapsim.core.timing import StepTimer, TimingSummary

scan_logger = logging.getLogger("dapsim.simulator")

SCHEMA_VERSION = 1


def lo_grid_from_intensities(
    max_intensity: float = 28.0,
    settings: int = 29,
    intensities: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """Real LO amplitudes for an equidistant |beta|^2 grid from zero.

    An explicit list of intensities replaces the equidistant grid.
    """
    if intensities is not None:
        grid = np.asarray(intensities, dtype=float)
    else:
        if settings < 1:
            raise DapsValueError(
                "An LO grid needs at least one setting.",
                section="scan",
                field="settings",
            )
        grid = np.linspace(0.0, float(max_intensity), int(settings))
    if grid.size == 0 or np.any(grid < 0) or not np.all(np.isfinite(grid)):
        raise DapsValueError(
            "LO intensities must be a nonempty list of finite values >= 0.",
            section="scan",
            field="intensities",
        )
    return np.sqrt(grid)


def _setting_table(
    state: StateSpec, cfg: MultiplexConfig, index: int, beta: complex
) -> ClickTable:
    try:
        dist = frontend_distribution(state, cfg.frontend, beta)
        return multiplexed_statistics(dist, cfg)
    except DapsBaseError as err:
        # Attach the setting so the CLI can point at it.
        if err.setting is None:
            err.setting = index
        raise


def _simulate_setting(
    index: int,
    beta: complex,
    signals: Tuple[Tuple[int, StateSpec], ...],
    cfg: MultiplexConfig,
    trials: int,
    seed: int,
) -> Tuple[List[ScanSetting], ScanSetting, Dict[str, float]]:
    """All tables of one LO setting: each signal stream and the vacuum."""
    timer = StepTimer()
    out = []
    for stream, state in ((VACUUM_STREAM, StateSpec.vacuum()),) + signals:
        with timer.step("statistics"):
            table = _setting_table(state, cfg, index, beta)
        events = None
        if trials:
            with timer.step("sampling"):
                events = sample_events(table, trials, seed, index, stream)
        out.append(ScanSetting(index=index, beta=beta, exact=table, events=events))
    scan_logger.debug("Setting #%d (|beta|^2=%.4g) done", index, abs(beta) ** 2)
    return out[1:], out[0], timer.timings


def _run_scan(
    signals: Tuple[Tuple[int, StateSpec], ...],
    cfg: MultiplexConfig,
    lo_grid: Sequence[complex],
    trials: Optional[int],
    seed: int,
    processes: int,
    allow_process_parallelism: bool,
    timing: Optional[TimingSummary],
):
    grid = [complex(b) for b in lo_grid]
    if not grid:
        raise DapsValueError("The LO grid is empty.", section="scan")
    if trials is not None and trials < 0:
        raise DapsValueError("Trials must be >= 0.", section="scan", field="trials")
    runner = get_runner(processes, allow_process_parallelism)
    units = [
        (
            idx,
            functools.partial(
                _simulate_setting, idx, beta, signals, cfg, trials or 0, seed
            ),
        )
        for idx, beta in enumerate(grid)
    ]
    scan_logger.info(
        "Simulating %d settings (%d signal stream(s)) with %s",
        len(grid),
        len(signals),
        type(runner).__name__,
    )
    results = runner.run(units)
    if timing is not None:
        for _, _, timings in results:
            timing.add(timings)
    signal_settings = [[res[0][i] for res in results] for i in range(len(signals))]
    vacuum_settings = [res[1] for res in results]
    return signal_settings, vacuum_settings


def _metadata(cfg: MultiplexConfig, trials, seed) -> dict:
    imbalance = None
    if cfg.imbalance is not None and not cfg.is_symmetric:
        imbalance = {
            "weights": list(cfg.imbalance.weights or []) or None,
            "eta_scale": list(cfg.imbalance.eta_scale or []) or None,
        }
    return {
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "trials": trials or 0,
        "multiplex": {"S": cfg.S, "N": cfg.N, "K": cfg.K, "imbalance": imbalance},
        "frontend": {
            "t": [cfg.frontend.t.real, cfg.frontend.t.imag],
            "r": [cfg.frontend.r.real, cfg.frontend.r.imag],
            "n_max": cfg.frontend.n_max,
        },
        "detector": cfg.detector.to_record(),
    }


def scan_experiment(
    state: StateSpec,
    cfg: MultiplexConfig,
    lo_grid: Sequence[complex],
    trials: Optional[int] = None,
    seed: int = 0,
    processes: int = 1,
    allow_process_parallelism: bool = True,
    timing: Optional[TimingSummary] = None,
) -> ScanDataset:
    """Scan the LO over `lo_grid` for a signal and for the blocked signal.

    Args:
        state (:obj:`StateSpec`): The signal.
        cfg (:obj:`MultiplexConfig`): Front-end, multiplexer and detector.
        lo_grid: LO amplitudes, one per setting.
        trials (:obj:`int`, optional): Trials per setting. Without trials
            only the exact tables are produced.
        seed (:obj:`int`): Master seed.
        processes (:obj:`int`): Worker processes for the settings.
        allow_process_parallelism (:obj:`bool`): Use threads instead of
            processes when False (tests).
        timing (:obj:`TimingSummary`, optional): Collects step timings.

    """
    signals, vacuum = _run_scan(
        ((SIGNAL_STREAM, state),),
        cfg,
        lo_grid,
        trials,
        seed,
        processes,
        allow_process_parallelism,
        timing,
    )
    meta = _metadata(cfg, trials, seed)
    meta["state"] = state.to_record()
    return ScanDataset(tuple(signals[0]), tuple(vacuum), meta)


def scan_heralded(
    squeezing: float,
    herald_transmittance: float,
    herald_detector,
    khs: Sequence[int],
    cfg: MultiplexConfig,
    lo_grid: Sequence[complex],
    trials: Optional[int] = None,
    seed: int = 0,
    processes: int = 1,
    allow_process_parallelism: bool = True,
    timing: Optional[TimingSummary] = None,
) -> Dict[int, ScanDataset]:
    """One dataset per herald outcome, all sharing one vacuum scan.

    Each heralded dataset holds `trials` post-selected trials per setting.
    The heralding probability is kept in the metadata.
    """
    if not khs:
        raise DapsValueError("No herald outcomes requested.", section="heralding")
    herald_matrix = herald_detector.response_matrix(cfg.frontend.n_max)
    heralded: List[HeraldedState] = [
        heralded_pdc_state(
            squeezing,
            herald_transmittance,
            herald_matrix,
            int(k_h),
            n_max=min(cfg.frontend.n_max, herald_matrix.n_max),
        )
        for k_h in khs
    ]
    signals, vacuum = _run_scan(
        tuple((HERALD_STREAM_BASE + h.k_h, h.state) for h in heralded),
        cfg,
        lo_grid,
        trials,
        seed,
        processes,
        allow_process_parallelism,
        timing,
    )
    base = _metadata(cfg, trials, seed)
    out = {}
    for h, settings in zip(heralded, signals):
        meta = dict(base)
        meta["state"] = h.state.to_record()
        meta["heralding"] = {
            "squeezing": squeezing,
            "transmittance": herald_transmittance,
            "detector": herald_detector.to_record(),
            "k_h": h.k_h,
            "probability": h.probability,
        }
        out[h.k_h] = ScanDataset(tuple(settings), tuple(vacuum), meta)
    return out
