"""Information API."""

from typing import Dict, List

from dapsim.core import detector_readout
from dapsim.core.config_info import get_config_info
from dapsim.core.detectors import DetectorTuple


def list_detectors() -> List[DetectorTuple]:
    """Return a list of available detector models."""
    return list(detector_readout())


def list_config_info() -> Dict[str, str]:
    """Definitions of every documented config key, keyed `section:field`."""
    return {k: v["definition"] for k, v in sorted(get_config_info().items())}
