"""Counter-style seeding shared by every random draw of a run.

Each draw is keyed by (seed, setting, stream, chunk) through
``numpy.random.SeedSequence`` spawn keys, so results do not depend on
which worker produced them or in which order.
"""

import numpy as np

from dapsim.core.errors import DapsValueError

SIGNAL_STREAM = 0
VACUUM_STREAM = 1
BOOTSTRAP_STREAM = 2
ORACLE_STREAM = 3
# Heralded signals use HERALD_STREAM_BASE + k_h.
HERALD_STREAM_BASE = 16


def make_rng(
    seed: int, setting: int = 0, stream: int = 0, chunk: int = 0
) -> np.random.Generator:
    """Generator for one (setting, stream, chunk) cell of a seeded run."""
    if seed is None or int(seed) < 0:
        raise DapsValueError(f"Seed must be a nonnegative integer, got {seed!r}.")
    ss = np.random.SeedSequence(int(seed), spawn_key=(setting, stream, chunk))
    return np.random.default_rng(ss)
