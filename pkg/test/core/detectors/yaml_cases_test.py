"""Runs the detector consistency checks described in the YAML fixtures."""

import pytest

from dapsim.testing.detectors import assert_detector_case, load_test_cases

ids, test_cases = load_test_cases("test/fixtures/detectors/*.yml")


@pytest.mark.parametrize("test_case", test_cases, ids=ids)
def test__detector_yaml_cases(test_case):
    """Fock and coherent responses agree for each case."""
    assert_detector_case(test_case)
