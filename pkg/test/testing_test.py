"""Test the dapsim.testing module."""

from types import SimpleNamespace

import numpy as np
import pytest
from _pytest.outcomes import Failed, Skipped

from dapsim.core.dataset import ClickTable
from dapsim.core.detectors import detector_selector
from dapsim.core.estimator import EstimateWithError
from dapsim.testing.detectors import (
    DetectorTestCase,
    assert_detector_case,
    assert_detector_consistent,
    assert_estimate_consistent,
    assert_probability_table,
    load_test_cases,
)


def test__testing__load_test_cases():
    """Cases are named after their model and inherit the defaults."""
    ids, cases = load_test_cases("test/fixtures/detectors/onoff.yml")
    assert ids == ["onoff_lossy", "onoff_dark"]
    assert cases[0] == DetectorTestCase(model="onoff", params={"eta": 0.5})
    assert cases[1].intensities == [0.0, 3.0]


def test__testing__probability_table():
    """Normalised tables pass, anything else fails."""
    assert_probability_table(ClickTable(np.full((2, 2), 0.25)))
    with pytest.raises(Failed) as failed:
        assert_probability_table(SimpleNamespace(probs=np.array([0.5, 0.4])))
    failed.match("sums to")
    with pytest.raises(Failed) as failed:
        assert_probability_table(SimpleNamespace(probs=np.array([1.1, -0.1])))
    failed.match("negative entries")


def test__testing__estimate_consistent():
    """Estimates pass within k combined errors."""
    est = EstimateWithError(1.0, 0.1, 0.0, 1e6)
    assert_estimate_consistent(est, 1.4)
    with pytest.raises(Failed) as failed:
        assert_estimate_consistent(est, 1.4, k=3.0)
    failed.match("combined errors")


def test__testing__detector_consistent():
    """Built in models pass, a thin truncation is refused."""
    assert_detector_consistent(detector_selector("photoelectric", eta=0.7))
    with pytest.raises(Failed) as failed:
        assert_detector_consistent(
            detector_selector("onoff"), n_max=5, intensities=[4.0]
        )
    failed.match("raise n_max")


def test__testing__detector_case_skip():
    """Cases marked to skip are skipped."""
    with pytest.raises(Skipped):
        assert_detector_case(DetectorTestCase(model="tes", skip="slow"))
