"""Tests for pairwise discrimination of curves."""

import numpy as np
import pytest
from scipy.special import ndtr

from dapsim.core.analysis import (
    RadialCurve,
    curve_from_values,
    discrimination_matrix,
    discrimination_probability,
)
from dapsim.core.errors import DapsDataError, DapsValueError
from dapsim.core.estimator import EstimateWithError


def _curve(means, delta=0.1):
    x = np.linspace(0.0, 2.0, len(means))
    points = [EstimateWithError(float(m), delta, 0.0, 1e6) for m in means]
    return RadialCurve(x, points)


def test__discrimination__diagonal():
    """A curve against itself only fails by chance: 1 - (Phi(3) - Phi(-3))^n."""
    curve = _curve(np.linspace(1.0, 0.0, 29))
    p = discrimination_probability(curve, curve)
    assert p == pytest.approx(1 - (ndtr(3) - ndtr(-3)) ** 29)
    assert p == pytest.approx(0.0754, abs=1e-4)


def test__discrimination__separated_curves():
    """Curves ten errors apart are always told apart."""
    a = _curve([1.0, 0.5, 0.0])
    b = _curve([1.0, 0.5, np.sqrt(2)])
    assert discrimination_probability(a, b) == pytest.approx(1.0)


def test__discrimination__one_point_separation():
    """At one setting the same-probability is Phi(d + k) - Phi(d - k)."""
    a = _curve([0.0], delta=0.3)
    b = _curve([0.5], delta=0.4)
    # Combined error 0.5, so d = 1.
    expected = 1 - (ndtr(4.0) - ndtr(-2.0))
    assert discrimination_probability(a, b) == pytest.approx(expected)
    assert discrimination_probability(a, b, width=1.0) == pytest.approx(
        1 - (ndtr(2.0) - ndtr(0.0))
    )


def test__discrimination__matrix():
    """The matrix is symmetric with the constant diagonal."""
    curves = [_curve([1.0, 0.5]), _curve([1.0, 0.6]), _curve([0.0, 0.0])]
    mat = discrimination_matrix(curves, labels=["vac", "coh", "fock"])
    np.testing.assert_allclose(mat.probabilities, mat.probabilities.T)
    diag = 1 - (ndtr(3) - ndtr(-3)) ** 2
    np.testing.assert_allclose(np.diag(mat.probabilities), diag)
    assert mat.probabilities[0, 2] == pytest.approx(1.0, abs=1e-4)
    rows = mat.to_rows()
    assert rows[0] == ["", "vac", "coh", "fock"]
    assert rows[3][0] == "fock"
    assert mat.to_record()["labels"] == ["vac", "coh", "fock"]


def test__discrimination__default_labels():
    """Unlabelled curves are numbered."""
    mat = discrimination_matrix([_curve([1.0]), _curve([2.0])])
    assert mat.labels == ("curve0", "curve1")


def test__discrimination__rejects():
    """Labels must match the curves, grids must agree."""
    with pytest.raises(DapsValueError):
        discrimination_matrix([_curve([1.0]), _curve([2.0])], labels=["a"])
    with pytest.raises(DapsDataError):
        discrimination_probability(
            _curve([1.0, 0.5]), curve_from_values([0.0, 2.0], [1.0, 0.5], "raw")
        )
