"""Tests for the displacement matrix elements."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dapsim.core.errors import DapsValueError
from dapsim.core.fock import (
    displaced_fock_overlap,
    displaced_number_probabilities,
    displacement_matrix,
)

amplitudes = st.complex_numbers(
    max_magnitude=3.0, allow_nan=False, allow_infinity=False
)


@settings(max_examples=40)
@given(
    n=st.integers(min_value=0, max_value=20),
    m=st.integers(min_value=0, max_value=20),
    gamma=amplitudes,
)
def test__displacement__closed_form_matches_recurrence(n, m, gamma):
    """The Laguerre closed form and the recurrence agree."""
    mat = displacement_matrix(20, gamma)
    assert displaced_fock_overlap(n, m, gamma) == pytest.approx(
        mat[n, m], abs=1e-10
    )


@pytest.mark.parametrize("gamma", [0.7, -1.2j, 1 + 1j])
def test__displacement__coherent_column(gamma):
    """D(gamma)|0> is the coherent state |gamma>."""
    mat = displacement_matrix(15, gamma)
    n = np.arange(16)
    expected = np.array(
        [
            math.exp(-abs(gamma) ** 2 / 2) * gamma ** k / math.sqrt(math.factorial(k))
            for k in n
        ]
    )
    assert np.allclose(mat[:, 0], expected, atol=1e-13)


def test__displacement__adjoint():
    """<n|D(gamma)|m> = conj(<m|D(-gamma)|n>)."""
    gamma = 0.8 - 0.3j
    assert np.allclose(
        displacement_matrix(12, gamma), displacement_matrix(12, -gamma).conj().T
    )


def test__displacement__probabilities_stochastic():
    """Low columns keep all their mass inside a generous truncation."""
    probs = displaced_number_probabilities(80, 2.0 + 1.0j)
    assert np.allclose(probs[:, :10].sum(axis=0), 1.0, atol=1e-12)


def test__displacement__identity():
    """No displacement is the identity."""
    assert np.array_equal(displacement_matrix(4, 0), np.eye(5))
    assert displaced_fock_overlap(3, 3, 0) == 1
    assert displaced_fock_overlap(3, 2, 0) == 0


def test__displacement__high_index_stable():
    """The top of the supported range stays bounded."""
    val = displaced_fock_overlap(150, 149, 1.5)
    assert np.isfinite(val)
    assert abs(val) <= 1.0
    mat = displacement_matrix(150, 5.0)
    assert np.all(np.isfinite(mat))
    assert np.max(np.abs(mat)) <= 1.0 + 1e-12


@pytest.mark.parametrize(
    "args",
    [(0, 0, 40.0), (0, 151, 1.0), (-1, 0, 1.0), (0, 0, complex("nan"))],
)
def test__displacement__rejects(args):
    """Too large displacements and indices are rejected."""
    with pytest.raises(DapsValueError):
        displaced_fock_overlap(*args)
