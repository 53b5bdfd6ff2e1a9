"""Common Test Fixtures."""
import logging

import numpy as np
import pytest

from dapsim.core.detectors import detector_selector
from dapsim.core.fock import FrontendConfig, StateSpec
from dapsim.core.simulator import MultiplexConfig, scan_experiment


def make_multiplex(
    transmittance=0.8,
    n_max=20,
    S=1,
    model="photoelectric",
    imbalance=None,
    **params,
):
    """A multiplexer with an explicit truncation.

    The photoelectric default has no explicit bins, so K follows n_max and
    no outcomes are folded.
    """
    params.setdefault("eta", 1.0)
    return MultiplexConfig(
        S=S,
        frontend=FrontendConfig.from_transmittance(transmittance, n_max),
        detector=detector_selector(model, **params),
        imbalance=imbalance,
    )


def exact_scan(state, cfg, intensities, **kwargs):
    """Exact tables over an LO grid given as intensities |beta|^2."""
    return scan_experiment(state, cfg, np.sqrt(np.asarray(intensities)), **kwargs)


@pytest.fixture()
def multiplex_factory():
    """Return the multiplexer factory."""
    return make_multiplex


@pytest.fixture()
def scan_factory():
    """Return the exact scan factory."""
    return exact_scan


@pytest.fixture(scope="session")
def fock1_scan():
    """|1> at eta |t|^2 = 0.8 on a grid straddling the Wigner zero."""
    cfg = make_multiplex()
    return exact_scan(StateSpec.fock(1), cfg, np.linspace(0.0, 3.0, 11))


@pytest.fixture(scope="session")
def vacuum_scan():
    """The blocked signal on the grid of `fock1_scan`."""
    cfg = make_multiplex()
    return exact_scan(StateSpec.vacuum(), cfg, np.linspace(0.0, 3.0, 11))


@pytest.fixture()
def mock_xdg_home(monkeypatch):
    """Sets the XDG_CONFIG_HOME variable."""
    monkeypatch.setenv("XDG_CONFIG_HOME", "~/.config/my/special/path")


@pytest.fixture()
def daps_caplog(caplog, monkeypatch):
    """caplog which still sees dapsim records after the CLI detached them."""
    monkeypatch.setattr(logging.getLogger("dapsim"), "propagate", True)
    return caplog
