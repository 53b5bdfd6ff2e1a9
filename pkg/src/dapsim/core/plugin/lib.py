"""Base implementation for the plugin."""

import os.path

from dapsim.core.config import ConfigLoader
from dapsim.core.config_info import STANDARD_CONFIG_INFO_DICT
from dapsim.core.detectors.photoelectric import OnOffDetector, PhotoelectricDetector
from dapsim.core.detectors.tes import TesDetector
from dapsim.core.plugin import hookimpl


@hookimpl
def get_detector_models():
    """Get the built-in detector models."""
    return [PhotoelectricDetector, OnOffDetector, TesDetector]


@hookimpl
def load_default_config() -> dict:
    """Loads the default configuration for the plugin."""
    return ConfigLoader.get_global().load_default_config_file(
        file_dir=os.path.join(os.path.dirname(os.path.dirname(__file__))),
        file_name="default_config.cfg",
    )


@hookimpl
def get_configs_info() -> dict:
    """Get config validations and descriptions."""
    return STANDARD_CONFIG_INFO_DICT
