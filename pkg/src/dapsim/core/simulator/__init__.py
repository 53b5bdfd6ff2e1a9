"""Exact and sampled multiplexed click statistics for LO scans."""

# flake8: noqa: F401

from dapsim.core.dataset import ClickTable, CoincidenceCounts, ScanDataset, ScanSetting
from dapsim.core.simulator.heralding import (
    HeraldedState,
    heralded_pdc_state,
    pdc_truncation,
)
from dapsim.core.simulator.multiplex import (
    ImbalanceConfig,
    MultiplexConfig,
    click_statistics_exact,
    click_statistics_histogram,
    click_statistics_tuples,
    multiplexed_statistics,
)
from dapsim.core.simulator.oracle import OracleEstimate, pfunction_mc_oracle
from dapsim.core.simulator.sampling import sample_events
from dapsim.core.simulator.scan import (
    lo_grid_from_intensities,
    scan_experiment,
    scan_heralded,
)
