"""Phase-insensitive detector models.

Every model provides a Fock-diagonal response matrix and a closed form
response to coherent light. Models are discovered through the plugin hook
`get_detector_models`, so third-party packages can add their own.
"""

# flake8: noqa: F401

from dapsim.core.detectors.base import (
    CoherentResponse,
    DetectorModel,
    DetectorTuple,
    ResponseMatrix,
    detector_from_section,
    detector_readout,
    detector_selector,
    list_detector_names,
)
from dapsim.core.detectors.photoelectric import (
    OnOffDetector,
    PhotoelectricDetector,
    onoff_response,
    photoelectric_response,
)
from dapsim.core.detectors.tes import TesDetector, tes_response


def coherent_response_of(name: str = "photoelectric", n_max=None, **params):
    """Closed form coherent-state response of a named detector model.

    Args:
        name (:obj:`str`): Registered model name.
        n_max (:obj:`int`, optional): Only needed by models whose last bin
            follows the truncation (photoelectric without explicit bins).
        **params: Model parameters, validated as for the matrix builders.

    """
    return detector_selector(name, **params).coherent_response(n_max)
