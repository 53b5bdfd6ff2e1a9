"""The core elements of dapsim."""

# flake8: noqa: F401
import tblib.pickling_support  # type: ignore

# Config objects
from dapsim.core.config import DapsConfig
from dapsim.core.experiment import ExperimentConfig

# Detector introspection
from dapsim.core.detectors import detector_readout, detector_selector

# All of the errors.
from dapsim.core.errors import (
    DapsBaseError,
    DapsConfigError,
    DapsConvergenceError,
    DapsDataError,
    DapsNumericError,
    DapsTruncationError,
    DapsValueError,
)

# Timing objects
from dapsim.core.timing import TimingSummary

# Scan generation may run in worker processes (--processes). Exceptions raised
# there are sent back to the parent with their traceback, which needs tblib to
# make traceback objects picklable.
tblib.pickling_support.install()
