"""Cross-checks of the Fock pipeline against the P-function Monte Carlo."""

import numpy as np
import pytest

from dapsim.core.errors import DapsValueError
from dapsim.core.fock import StateSpec, frontend_distribution
from dapsim.core.simulator import (
    ImbalanceConfig,
    multiplexed_statistics,
    pfunction_mc_oracle,
)
from dapsim.core.simulator.oracle import sample_p_function


def _exact(state, cfg, beta):
    dist = frontend_distribution(state, cfg.frontend, beta)
    return multiplexed_statistics(dist, cfg).probs


def test__oracle__coherent_is_exact(multiplex_factory):
    """A point-like P function reproduces the table without spread."""
    cfg = multiplex_factory(model="onoff", eta=0.6, n_max=30)
    state = StateSpec.coherent(1.0 + 0.5j)
    est = pfunction_mc_oracle(state, cfg, 0.7, samples=10, seed=1)
    assert np.all(est.stderr < 1e-12)
    assert np.max(np.abs(est.z_scores(_exact(state, cfg, 0.7)))) < 1e-2


@pytest.mark.parametrize(
    "state", [StateSpec.thermal(0.5), StateSpec.coherent(1.2, phase_randomized=True)]
)
def test__oracle__agrees_with_fock_pipeline(multiplex_factory, state):
    """Classical states agree cell by cell within five standard errors."""
    cfg = multiplex_factory(model="onoff", eta=0.7, S=2, n_max=40)
    est = pfunction_mc_oracle(state, cfg, 1.0, samples=200_000, seed=2)
    assert est.samples == 200_000
    assert est.probs.shape == (2, 2, 2, 2)
    assert np.max(np.abs(est.z_scores(_exact(state, cfg, 1.0)))) < 5


def test__oracle__imbalanced(multiplex_factory):
    """Unequal splitting and efficiencies go through both pipelines alike."""
    cfg = multiplex_factory(
        model="onoff",
        eta=0.8,
        n_max=40,
        imbalance=ImbalanceConfig(weights=(0.7, 0.3), eta_scale=(1.0, 0.8)),
    )
    state = StateSpec.thermal(0.7)
    est = pfunction_mc_oracle(state, cfg, 0.8, samples=200_000, seed=3)
    assert np.max(np.abs(est.z_scores(_exact(state, cfg, 0.8)))) < 5


@pytest.mark.slow
def test__oracle__tes_thermal(multiplex_factory):
    """The nonlinear TES response agrees with its Fock POVM."""
    cfg = multiplex_factory(model="tes", eta=0.9, eta2=1e-4, bins=4, n_max=30)
    state = StateSpec.thermal(0.5)
    est = pfunction_mc_oracle(state, cfg, 1.5, samples=1_000_000, seed=4)
    assert np.max(np.abs(est.z_scores(_exact(state, cfg, 1.5)))) < 5


def test__oracle__reproducible(multiplex_factory):
    """The seed fixes the estimate."""
    cfg = multiplex_factory(model="onoff", n_max=40)
    a = pfunction_mc_oracle(StateSpec.thermal(1.0), cfg, 0.0, samples=1000, seed=7)
    b = pfunction_mc_oracle(StateSpec.thermal(1.0), cfg, 0.0, samples=1000, seed=7)
    assert np.array_equal(a.probs, b.probs)


def test__oracle__p_function_samples():
    """Thermal amplitudes have the right mean photon number."""
    rng = np.random.default_rng(0)
    alpha = sample_p_function(StateSpec.thermal(2.0), 100_000, rng)
    assert np.mean(np.abs(alpha) ** 2) == pytest.approx(2.0, rel=0.03)
    mixed = StateSpec.mixture(
        [(0.5, StateSpec.vacuum()), (0.5, StateSpec.coherent(1.0))]
    )
    alpha = sample_p_function(mixed, 1000, rng)
    assert set(np.round(np.abs(alpha), 12)) == {0.0, 1.0}


def test__oracle__rejects(multiplex_factory):
    """Nonclassical states have no P function to sample."""
    cfg = multiplex_factory(model="onoff")
    with pytest.raises(DapsValueError):
        pfunction_mc_oracle(StateSpec.fock(1), cfg, 0.0, samples=10)
    with pytest.raises(DapsValueError):
        pfunction_mc_oracle(StateSpec.thermal(1.0), cfg, 0.0, samples=1)


@pytest.mark.slow
@pytest.mark.parametrize("beta", [0.0, 0.7, 1.5])
@pytest.mark.parametrize(
    "state",
    [StateSpec.thermal(1.0), StateSpec.coherent(1.2, phase_randomized=True)],
    ids=["thermal", "phase_randomized_coherent"],
)
def test__oracle__million_samples(multiplex_factory, state, beta):
    """A million P function draws agree with the table at several LO amplitudes."""
    cfg = multiplex_factory(model="onoff", eta=0.7, S=2, n_max=40)
    est = pfunction_mc_oracle(state, cfg, beta, samples=1_000_000, seed=11)
    assert np.max(np.abs(est.z_scores(_exact(state, cfg, beta)))) < 5
