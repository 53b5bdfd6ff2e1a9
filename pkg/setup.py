#!/usr/bin/env python

"""The script for setting up dapsim."""


import sys

if sys.version_info[0] < 3:
    raise Exception("Dapsim does not support Python 2. Please upgrade to Python 3.")

import configparser
from os.path import dirname
from os.path import join

from setuptools import find_packages, setup


# Get the global config info as currently stated
# (we use the config file to avoid actually loading any python here)
config = configparser.ConfigParser()
config.read(["src/dapsim/config.ini"])
version = config.get("dapsim", "version")


def read(*names, **kwargs):
    """Read a file and return the contents as a string."""
    return open(
        join(dirname(__file__), *names), encoding=kwargs.get("encoding", "utf8")
    ).read()


setup(
    name="dapsim",
    version=version,
    license="MIT License",
    description=(
        "Simulator and estimator for detector-agnostic phase-space distributions"
    ),
    long_description=read("README.md"),
    # Make sure pypi is expecting markdown!
    long_description_content_type="text/markdown",
    python_requires=">=3.7",
    keywords=[
        "dapsim",
        "quantum optics",
        "phase space",
        "wigner function",
        "photon counting",
        "nonclassicality",
        "multiplexed detection",
    ],
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    include_package_data=True,
    package_data={"dapsim": ["config.ini", "core/default_config.cfg"]},
    classifiers=[
        "Development Status :: 4 - Beta",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: Unix",
        "Operating System :: POSIX",
        "Operating System :: Microsoft :: Windows",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: Implementation :: CPython",
        "Topic :: Scientific/Engineering :: Physics",
    ],
    install_requires=[
        # Core
        "click>=7.1",
        "colorama>=0.3",
        "configparser",
        "oyaml",
        # Numerics
        "numpy>=1.17",
        "scipy>=1.4",
        # High precision series of the TES response
        "mpmath",
        # Used for finding os-specific application config dirs
        "appdirs",
        # Cached property for the response matrix cache
        "cached-property",
        # Detector model plugins
        "pluggy",
        # We provide a testing library for plugins in dapsim.testing
        "pytest",
        # For parsing pyproject.toml
        "toml",
        # For returning exceptions from multiprocessing.Pool.map()
        "tblib",
    ],
    entry_points={
        "console_scripts": [
            "dapsim = dapsim.cli.commands:cli",
        ],
        "dapsim": ["dapsim = dapsim.core.plugin.lib"],
    },
)
