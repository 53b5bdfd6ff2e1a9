"""Tests for photon-number distributions and state specifications."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import binom

from dapsim.core.errors import DapsTruncationError, DapsValueError
from dapsim.core.fock import (
    MAX_FOCK_INDEX,
    FockDistribution,
    StateSpec,
    attenuate,
    attenuation_matrix,
    loss_diagonal,
)
from dapsim.core.fock.distribution import check_index, thermal_weights

unit = st.floats(min_value=0.0, max_value=1.0)


def test__fock__distribution_normalised():
    """A deficit within the bound is renormalised and recorded."""
    dist = FockDistribution([0.5, 0.5 - 1e-12])
    assert dist.probs.sum() == pytest.approx(1.0, abs=1e-15)
    assert dist.truncation_loss == pytest.approx(1e-12, abs=1e-15)
    assert dist.n_max == 1
    assert dist.mean() == pytest.approx(0.5)
    with pytest.raises(ValueError):
        dist.probs[0] = 1.0


def test__fock__distribution_truncation_error():
    """Too much missing mass raises with the tail attached."""
    with pytest.raises(DapsTruncationError) as excinfo:
        FockDistribution([0.5, 0.4])
    assert excinfo.value.tail_mass == pytest.approx(0.1)


@pytest.mark.parametrize("probs", [[], [[1.0]], [1.1, -0.1]])
def test__fock__distribution_rejects(probs):
    """Empty, nested and negative vectors are rejected."""
    with pytest.raises(DapsValueError):
        FockDistribution(probs)


def test__fock__distribution_padded():
    """Padding adds zeros, cutting drops the top."""
    dist = FockDistribution([0.25, 0.75])
    assert list(dist.padded(3)) == [0.25, 0.75, 0.0, 0.0]
    assert list(dist.padded(0)) == [0.25]
    assert dist == FockDistribution([0.25, 0.75])


@given(m=st.integers(min_value=0, max_value=40), tau=unit)
def test__fock__loss_diagonal_binomial(m, tau):
    """|m> through a lossy channel keeps a binomial number of photons."""
    dist = loss_diagonal(m, tau)
    assert dist.n_max == m
    assert dist.mean() == pytest.approx(m * tau, abs=1e-9)
    assert np.allclose(dist.probs, binom.pmf(np.arange(m + 1), m, tau))


@settings(max_examples=50)
@given(a=unit, b=unit)
def test__fock__attenuation_composes(a, b):
    """Two lossy channels in a row are one with the product transmittance."""
    dist = FockDistribution(np.full(11, 1 / 11))
    left = attenuate(attenuate(dist, a), b).probs
    right = attenuate(dist, a * b).probs
    assert np.allclose(left, right, atol=1e-12)


def test__fock__attenuation_matrix_stochastic():
    """Columns of the loss matrix are distributions."""
    mat = attenuation_matrix(30, 0.37)
    assert np.allclose(mat.sum(axis=0), 1.0)
    assert np.all(mat >= 0)
    assert np.allclose(np.tril(mat, -1), 0.0)


@pytest.mark.parametrize("tau", [-0.1, 1.5])
def test__fock__bad_transmittance(tau):
    """Transmittances live in [0, 1]."""
    with pytest.raises(DapsValueError):
        loss_diagonal(2, tau)
    with pytest.raises(DapsValueError):
        attenuation_matrix(2, tau)


def test__fock__check_index():
    """Indices beyond the supported range are rejected."""
    check_index(MAX_FOCK_INDEX)
    with pytest.raises(DapsValueError):
        check_index(MAX_FOCK_INDEX + 1)
    with pytest.raises(DapsValueError):
        check_index(-1)
    with pytest.raises(DapsValueError):
        loss_diagonal(MAX_FOCK_INDEX + 1, 0.5)


def test__fock__thermal_weights_tail():
    """The reported tail is what the weights miss."""
    w, tail = thermal_weights(2.0, 40)
    assert w.sum() + tail == pytest.approx(1.0, abs=1e-14)
    assert w[1] / w[0] == pytest.approx(2 / 3)


@pytest.mark.parametrize(
    "state,classical,symmetric,mean",
    [
        (StateSpec.vacuum(), True, True, 0.0),
        (StateSpec.fock(0), True, True, 0.0),
        (StateSpec.fock(2), False, True, 2.0),
        (StateSpec.coherent(1 + 1j), True, False, 2.0),
        (StateSpec.coherent(1 + 1j, phase_randomized=True), True, True, 2.0),
        (StateSpec.thermal(0.5), True, True, 0.5),
        (StateSpec.fock_mixture([0.5, 0.5]), False, True, 0.5),
        (
            StateSpec.mixture([(0.5, StateSpec.thermal(1)), (0.5, StateSpec.vacuum())]),
            True,
            True,
            0.5,
        ),
    ],
)
def test__fock__state_properties(state, classical, symmetric, mean):
    """Classicality, phase symmetry and mean photon number."""
    assert state.is_classical is classical
    assert state.is_rotationally_symmetric is symmetric
    assert state.mean_photons() == pytest.approx(mean)


def test__fock__state_photon_weights():
    """Diagonals of the built in states."""
    w, tail = StateSpec.fock(3).photon_weights(5)
    assert list(w) == [0, 0, 0, 1, 0, 0] and tail == 0.0
    w, tail = StateSpec.fock(7).photon_weights(5)
    assert tail == 1.0
    w, tail = StateSpec.coherent(2).photon_weights(60)
    assert w.sum() == pytest.approx(1.0) and tail < 1e-20
    w, _ = StateSpec.fock_mixture([0.2, 0.0, 0.8]).photon_weights(3)
    assert np.allclose(w, [0.2, 0.0, 0.8, 0.0])


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(variant="squeezed"),
        dict(variant="fock", m=-1),
        dict(variant="thermal", nbar=-0.1),
        dict(variant="mixture"),
        dict(variant="mixture", components=((0.3, StateSpec.vacuum()),)),
    ],
)
def test__fock__state_invalid(kwargs):
    """Invalid states are rejected on construction."""
    with pytest.raises(DapsValueError):
        StateSpec(**kwargs)


def test__fock__state_record():
    """Records rebuild an equal state."""
    state = StateSpec.mixture(
        [(0.25, StateSpec.coherent(0.5j, True)), (0.75, StateSpec.fock(2))]
    )
    assert StateSpec.from_record(state.to_record()) == state
    assert "fock(2)" in state.describe()
    with pytest.raises(DapsValueError):
        StateSpec.from_record({"variant": "cat"})
