"""Tests for the coincidence count helpers."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dapsim.core.dataset import CoincidenceCounts
from dapsim.core.errors import DapsValueError
from dapsim.core.estimator import detector_counts, functional_values, symmetrize


@settings(max_examples=50, deadline=None)
@given(
    st.integers(min_value=2, max_value=3).flatmap(
        lambda N: st.lists(
            st.integers(min_value=0, max_value=50), min_size=3 ** N, max_size=3 ** N
        )
    )
)
def test__counts__symmetrize_parts(flat):
    """The parts add up to the input and the symmetric part is exchange-invariant."""
    N = 2 if len(flat) == 9 else 3
    counts = CoincidenceCounts(np.array(flat).reshape((3,) * N))
    sym, asym = symmetrize(counts)
    np.testing.assert_allclose(sym + asym, counts.counts)
    np.testing.assert_allclose(sym, np.swapaxes(sym, 0, 1))
    assert sym.sum() == pytest.approx(counts.counts.sum())


def test__counts__symmetrize_pair():
    """For two detectors the symmetric part is the average with the transpose."""
    counts = CoincidenceCounts([[4, 3], [1, 0]])
    sym, asym = symmetrize(counts)
    np.testing.assert_allclose(sym, [[4, 2], [2, 0]])
    np.testing.assert_allclose(asym, [[0, 1], [-1, 0]])


def test__counts__functional_values_callable():
    """Callables see the outcome tuples and fill the grid."""
    values = functional_values(lambda t: t[:, 0] - t[:, 1], N=2, K=2)
    assert values.shape == (3, 3)
    assert values[2, 0] == 2
    assert values[0, 1] == -1


def test__counts__functional_values_array_shape():
    """Arrays must match the outcome grid."""
    assert functional_values(np.zeros((2, 2, 2)), N=3, K=1).shape == (2, 2, 2)
    with pytest.raises(DapsValueError):
        functional_values(np.zeros((2, 2)), N=3, K=1)


def test__counts__detector_counts():
    """Each row counts how many detectors report each outcome."""
    counts = CoincidenceCounts(np.zeros((3, 3)))
    hists = detector_counts(counts)
    assert hists.shape == (9, 3)
    np.testing.assert_array_equal(hists.sum(axis=1), np.full(9, 2))
    # Tuples are in C order, so (0, 2) is the third row.
    np.testing.assert_array_equal(hists[2], [1, 0, 1])
    np.testing.assert_array_equal(hists[4], [0, 2, 0])
