"""Tests for the photoelectric and on-off detector models."""

import logging

import numpy as np
import pytest
from scipy.stats import binom

from dapsim.core.detectors import (
    OnOffDetector,
    PhotoelectricDetector,
    onoff_response,
    photoelectric_response,
)
from dapsim.core.errors import DapsValueError


def test__photoelectric__binomial():
    """Without folding every entry is binomial."""
    mat = photoelectric_response(0.6, None, 8)
    assert mat.K == 8
    assert not mat.overflow_folded
    n = np.arange(9)
    for k in range(9):
        assert np.allclose(mat.p[k], binom.pmf(k, n, 0.6))


def test__photoelectric__folded(daps_caplog):
    """Outcomes above K are merged into the last bin, with a warning."""
    with daps_caplog.at_level(logging.WARNING, logger="dapsim.detectors"):
        mat = photoelectric_response(0.8, 2, 6)
    assert mat.overflow_folded
    assert "folded" in daps_caplog.text
    assert mat.p[2, 6] == pytest.approx(binom.sf(1, 6, 0.8))
    assert np.allclose(mat.p.sum(axis=0), 1.0)


def test__photoelectric__ideal_is_identity():
    """A perfect counter reads the photon number."""
    mat = PhotoelectricDetector(eta=1.0).response_matrix(5)
    assert np.allclose(mat.p, np.eye(6))


def test__photoelectric__bins_follow_truncation():
    """Without explicit bins K is the truncation."""
    model = PhotoelectricDetector(eta=0.5)
    assert model.outcome_bins(12) == 12
    assert model.coherent_response(12).K == 12
    with pytest.raises(DapsValueError) as excinfo:
        model.coherent_response()
    assert excinfo.value.field == "bins"
    assert PhotoelectricDetector(eta=0.5, bins=3).outcome_bins() == 3


@pytest.mark.parametrize("eta", [-0.1, 1.01])
def test__photoelectric__bad_efficiency(eta):
    """Efficiencies outside [0, 1] name their field."""
    with pytest.raises(DapsValueError) as excinfo:
        PhotoelectricDetector(eta=eta)
    assert excinfo.value.field == "eta"
    with pytest.raises(DapsValueError):
        OnOffDetector(eta=eta)


def test__photoelectric__no_bins():
    """K=0 leaves nothing to measure."""
    with pytest.raises(DapsValueError):
        photoelectric_response(0.5, 0, 4)


def test__onoff__response():
    """No click with probability (1 - eta)^n."""
    mat = onoff_response(0.3, 4)
    assert mat.K == 1
    assert np.allclose(mat.p[0], 0.7 ** np.arange(5))
    resp = OnOffDetector(eta=0.3).coherent_response()
    assert resp(1.0)[0] == pytest.approx(np.exp(-0.3))
