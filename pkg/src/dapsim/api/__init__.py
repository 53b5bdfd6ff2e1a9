"""Elements which wrap the dapsim core library for public use."""

# flake8: noqa: F401

# Expose the simple api
from dapsim.api.simple import (
    ANALYSIS_MODES,
    AnalysisResult,
    analyze,
    estimate,
    load_experiment,
    simulate,
)
from dapsim.api.info import list_config_info, list_detectors
