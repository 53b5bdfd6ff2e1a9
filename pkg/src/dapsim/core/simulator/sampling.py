"""Seeded multinomial sampling of coincidence events."""

import logging
from typing import Optional

import numpy as np

from dapsim.core.dataset import ClickTable, CoincidenceCounts
from dapsim.core.errors import DapsValueError
from dapsim.core.seeding import SIGNAL_STREAM, make_rng

sampling_logger = logging.getLogger("dapsim.simulator")

CHUNK_TRIALS = 10_000_000


def _cell_probabilities(table: ClickTable) -> np.ndarray:
    p = np.clip(table.probs.reshape(-1), 0.0, None)
    return p / p.sum()


def sample_events(
    table: ClickTable,
    trials: int,
    seed: int,
    setting: int = 0,
    stream: int = SIGNAL_STREAM,
    chunk_trials: Optional[int] = None,
) -> CoincidenceCounts:
    """Draw `trials` multiplexed outcomes from an exact table.

    Args:
        table (:obj:`ClickTable`): The exact outcome probabilities.
        trials (:obj:`int`): Number of trials, at least one.
        seed (:obj:`int`): Master seed of the run.
        setting (:obj:`int`): Index of the LO setting.
        stream (:obj:`int`): Independent stream within the setting
            (signal, vacuum, heralded outcome, ...).
        chunk_trials (:obj:`int`, optional): Trials per chunk, each chunk
            with its own seed. Part of the determinism contract.

    """
    if int(trials) < 1:
        raise DapsValueError(f"Need at least one trial, got {trials}.", field="trials")
    chunk_trials = chunk_trials or CHUNK_TRIALS
    p = _cell_probabilities(table)
    counts = np.zeros(p.size, dtype=np.int64)
    remaining = int(trials)
    chunk = 0
    while remaining > 0:
        n = min(remaining, chunk_trials)
        counts += make_rng(seed, setting, stream, chunk).multinomial(n, p)
        remaining -= n
        chunk += 1
    sampling_logger.debug(
        "Sampled %d trials in %d chunk(s) for setting #%d stream %d",
        trials,
        chunk,
        setting,
        stream,
    )
    return CoincidenceCounts(counts.reshape(table.probs.shape))
