"""Tests for the exact multiplexed click statistics."""

import itertools

import numpy as np
import pytest
from scipy.stats import poisson

from dapsim.core.detectors import detector_selector
from dapsim.core.errors import DapsValueError
from dapsim.core.fock import (
    FockDistribution,
    FrontendConfig,
    StateSpec,
    frontend_distribution,
)
from dapsim.core.simulator import (
    ImbalanceConfig,
    MultiplexConfig,
    click_statistics_exact,
    click_statistics_histogram,
    click_statistics_tuples,
    multiplexed_statistics,
)
from dapsim.core.simulator.multiplex import tuple_probability


def _table(cfg, state, beta=0.0):
    return multiplexed_statistics(
        frontend_distribution(state, cfg.frontend, beta), cfg
    )


def test__multiplex__config(multiplex_factory):
    """N and K follow from the depth and the detector."""
    cfg = multiplex_factory(S=2, model="tes", bins=3)
    assert (cfg.N, cfg.K) == (4, 3)
    assert cfg.is_symmetric
    assert cfg.arm_weights() == (0.25,) * 4
    assert cfg.with_frontend(cfg.frontend.with_n_max(10)).frontend.n_max == 10


@pytest.mark.parametrize(
    "kwargs,field",
    [
        (dict(S=0), "depth"),
        (dict(S=4), "depth"),
        (dict(S=1, imbalance=ImbalanceConfig(weights=(0.2, 0.3, 0.5))), "weights"),
        (dict(S=3, n_max=20), "depth"),
    ],
)
def test__multiplex__config_rejects(multiplex_factory, kwargs, field):
    """Depth, per-arm vectors and table size are checked."""
    with pytest.raises(DapsValueError) as excinfo:
        multiplex_factory(**kwargs)
    assert excinfo.value.field == field


@pytest.mark.parametrize(
    "kwargs,field",
    [
        (dict(weights=(0.6, 0.6)), "weights"),
        (dict(weights=(1.0, 0.0)), "weights"),
        (dict(eta_scale=(1.0, -0.5)), "eta_scale"),
    ],
)
def test__multiplex__imbalance_rejects(kwargs, field):
    """Splitting weights must be a distribution, scales positive."""
    with pytest.raises(DapsValueError) as excinfo:
        ImbalanceConfig(**kwargs)
    assert excinfo.value.field == field


def test__multiplex__single_detector_is_frontend(multiplex_factory):
    """One ideal counter reads the front-end distribution itself."""
    cfg = multiplex_factory(S=1, n_max=20)
    dist = FockDistribution([0.1, 0.2, 0.3, 0.4])
    table = click_statistics_exact(dist, cfg.detector.response_matrix(3), 1)
    assert table.probs == pytest.approx([0.1, 0.2, 0.3, 0.4])


def test__multiplex__single_photon_split(multiplex_factory):
    """A single photon ends up in one of the two detectors."""
    cfg = multiplex_factory(transmittance=0.8, S=1)
    table = _table(cfg, StateSpec.fock(1))
    assert tuple_probability(table, (0, 0)) == pytest.approx(0.2)
    assert tuple_probability(table, (1, 0)) == pytest.approx(0.4)
    assert tuple_probability(table, (0, 1)) == pytest.approx(0.4)
    assert table.probs.sum() == pytest.approx(1.0, abs=1e-14)
    with pytest.raises(DapsValueError):
        tuple_probability(table, (0, 0, 0))


def test__multiplex__imbalanced_split(multiplex_factory):
    """Unequal weights split the photon unequally."""
    cfg = multiplex_factory(
        transmittance=0.8, S=1, imbalance=ImbalanceConfig(weights=(0.7, 0.3))
    )
    assert not cfg.is_symmetric
    table = _table(cfg, StateSpec.fock(1))
    assert tuple_probability(table, (1, 0)) == pytest.approx(0.56)
    assert tuple_probability(table, (0, 1)) == pytest.approx(0.24)


def test__multiplex__coherent_factorises(multiplex_factory):
    """Coherent light gives independent Poisson counts in every arm."""
    cfg = multiplex_factory(transmittance=0.5, n_max=30, S=1, eta=0.6)
    beta = 1.5
    table = _table(cfg, StateSpec.coherent(1.0), beta)
    mu = abs(np.sqrt(0.5) * 1.0 - np.sqrt(0.5) * beta) ** 2
    arm = poisson.pmf(np.arange(31), 0.6 * mu / 2)
    assert np.allclose(table.probs, np.outer(arm, arm), atol=1e-12)


def test__multiplex__exchange_symmetry(multiplex_factory):
    """Balanced tables are invariant under any permutation of detectors."""
    cfg = multiplex_factory(S=2, n_max=12, model="tes", eta=0.8, bins=3)
    table = _table(cfg, StateSpec.fock_mixture([0.2, 0.3, 0.5]), 1.0)
    for perm in itertools.permutations(range(4)):
        assert np.array_equal(table.probs, np.transpose(table.probs, perm))


def test__multiplex__recursions_agree(multiplex_factory):
    """Histogram and tuple recursions give the same balanced table."""
    cfg = multiplex_factory(S=2, n_max=40, model="onoff", eta=0.7)
    dist = frontend_distribution(StateSpec.thermal(0.8), cfg.frontend, 0.9)
    exact = click_statistics_exact(dist, cfg.response(), 4)
    tuples = click_statistics_tuples(dist, [cfg.response()] * 4, [0.25] * 4)
    assert np.allclose(exact.probs, tuples, atol=1e-14)
    hists, probs = click_statistics_histogram(dist, cfg.response(), 4)
    assert probs.sum() == pytest.approx(1.0)
    assert hists.tolist() == sorted(hists.tolist())


def test__multiplex__efficiency_imbalance(multiplex_factory):
    """Per-arm efficiencies scale the click probability of their arm."""
    cfg = multiplex_factory(
        S=1,
        model="onoff",
        eta=0.8,
        imbalance=ImbalanceConfig(eta_scale=(1.0, 0.5)),
    )
    responses = cfg.arm_responses()
    assert responses[0].p[1, 1] == pytest.approx(0.8)
    assert responses[1].p[1, 1] == pytest.approx(0.4)
    table = _table(cfg, StateSpec.fock(1))
    assert table.marginal(0)[1] == pytest.approx(0.8 * 0.8 / 2)
    assert table.marginal(1)[1] == pytest.approx(0.8 * 0.4 / 2)


def test__multiplex__response_too_small():
    """The response matrix has to cover the distribution."""
    response = detector_selector("onoff").response_matrix(2)
    with pytest.raises(DapsValueError):
        click_statistics_exact(FockDistribution(np.full(5, 0.2)), response, 2)
    with pytest.raises(DapsValueError):
        click_statistics_exact(FockDistribution([1.0]), response, 0)


def test__multiplex__mixed_bins_rejected():
    """All arms need the same number of bins."""
    dist = FockDistribution([0.5, 0.5])
    a = detector_selector("onoff").response_matrix(1)
    b = detector_selector("photoelectric", bins=2).response_matrix(1)
    with pytest.raises(DapsValueError):
        click_statistics_tuples(dist, [a, b], [0.5, 0.5])


def test__multiplex__frontend_truncation_used():
    """The table has K+1 bins per detector."""
    cfg = MultiplexConfig(
        S=1,
        frontend=FrontendConfig.from_transmittance(0.9, 8),
        detector=detector_selector("photoelectric", eta=0.5, bins=2),
    )
    table = _table(cfg, StateSpec.fock(2), 0.5)
    assert table.probs.shape == (3, 3)
