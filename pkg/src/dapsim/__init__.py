"""Dapsim simulates and estimates detector-agnostic phase-space distributions."""
import sys

import pytest

# Expose the public API.
from dapsim.api import (  # noqa: F401
    analyze,
    estimate,
    list_config_info,
    list_detectors,
    load_experiment,
    simulate,
)

# Set the version attribute of the library
import pkg_resources
import configparser

# Get the current version
config = configparser.ConfigParser()
config.read([pkg_resources.resource_filename("dapsim", "config.ini")])

__version__ = config.get("dapsim", "version")

# Check major python version
if sys.version_info[0] < 3:
    raise Exception("Dapsim does not support Python 2. Please upgrade to Python 3.")
# Check minor python version
elif sys.version_info[1] < 7:
    raise Exception(
        "Dapsim %s only supports Python 3.7 and beyond. "
        "Use an earlier version of dapsim or a later version of Python" % __version__
    )

# Register helper functions to support variable introspection on failure.
pytest.register_assert_rewrite("dapsim.testing")
