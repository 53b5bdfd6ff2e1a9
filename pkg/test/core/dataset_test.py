"""Tests for outcome tables and scan datasets."""

import numpy as np
import pytest

from dapsim.core.dataset import (
    MAX_TUPLES,
    ClickTable,
    CoincidenceCounts,
    ScanDataset,
    ScanSetting,
    check_tractable,
    outcome_tuples,
    tuple_histograms,
)
from dapsim.core.errors import DapsDataError, DapsValueError


@pytest.fixture()
def table():
    """Two detectors, three bins, with a bias towards the first arm."""
    p = np.array([[0.3, 0.1, 0.0], [0.2, 0.1, 0.05], [0.1, 0.05, 0.1]])
    return ClickTable(p)


def test__dataset__outcome_tuples():
    """Tuples come in row major order."""
    tuples = outcome_tuples(2, 1)
    assert tuples.tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]
    hists, inverse = tuple_histograms(2, 1)
    assert hists.tolist() == [[0, 2], [1, 1], [2, 0]]
    assert inverse.tolist() == [2, 1, 1, 0]


def test__dataset__tractable():
    """Tables above the tuple limit are refused."""
    check_tractable(8, 5)
    with pytest.raises(DapsValueError) as excinfo:
        check_tractable(8, int(MAX_TUPLES ** (1 / 8)) + 1)
    assert excinfo.value.field == "depth"
    with pytest.raises(DapsValueError):
        check_tractable(0, 2)


def test__dataset__click_table(table):
    """Marginals and histogram probabilities."""
    assert (table.N, table.K) == (2, 2)
    assert table.marginal(0) == pytest.approx([0.4, 0.35, 0.25])
    assert table.marginal(1) == pytest.approx([0.6, 0.25, 0.15])
    # (N_0, N_1, N_2) = (1, 1, 0) collects (0, 1) and (1, 0).
    assert table.histogram_probability([1, 1, 0]) == pytest.approx(0.3)
    hists, probs = table.histogram_table()
    assert probs.sum() == pytest.approx(1.0)
    assert len(hists) == 6


@pytest.mark.parametrize(
    "probs,err",
    [
        ([[0.5, 0.5], [0.1, 0.0]], DapsValueError),
        ([[1.0, 0.1], [-0.1, 0.0]], DapsValueError),
        (np.full((2, 3), 1 / 6), DapsDataError),
        ([1.0], DapsDataError),
    ],
)
def test__dataset__click_table_rejects(probs, err):
    """Tables must be normalised, nonnegative and hypercubic."""
    with pytest.raises(err):
        ClickTable(probs)


def test__dataset__expected_counts(table):
    """Expected counts are real valued and scale the table."""
    counts = table.expected_counts(1000)
    assert not counts.is_integral
    assert counts.E == pytest.approx(1000.0)
    assert counts.frequencies() == pytest.approx(table.probs)
    with pytest.raises(DapsValueError):
        table.expected_counts(1)


def test__dataset__coincidence_counts():
    """Integer counts, from a mapping."""
    counts = CoincidenceCounts.from_mapping({(0, 1): 3, (1, 0): 1}, N=2, K=1)
    assert counts.is_integral
    assert counts.E == 4
    assert counts.counts.tolist() == [[0, 3], [1, 0]]
    assert counts.to_sparse() == [[[0, 1], 3], [[1, 0], 1]]
    assert CoincidenceCounts(np.array([[1, 2], [3, 4]], dtype=np.uint8)).is_integral
    with pytest.raises(DapsDataError):
        CoincidenceCounts.from_mapping({(0, 2): 1}, N=2, K=1)
    with pytest.raises(DapsDataError):
        CoincidenceCounts([[-1, 1], [0, 0]])
    with pytest.raises(DapsDataError):
        CoincidenceCounts([["a", "b"], ["c", "d"]])
    with pytest.raises(DapsDataError):
        CoincidenceCounts(np.zeros((2, 2), dtype=int)).frequencies()


def test__dataset__resampled():
    """Resamples keep the total and are reproducible."""
    counts = CoincidenceCounts([[500, 200], [200, 100]])
    a = counts.resampled(np.random.default_rng(1))
    b = counts.resampled(np.random.default_rng(1))
    assert a == b
    assert a.E == 1000
    assert a.is_integral


def test__dataset__sparse_round_trip(table):
    """Sparse records rebuild the same table."""
    assert ClickTable.from_sparse(table.to_sparse(), 2, 2) == table


def _settings(table, n=3):
    return tuple(ScanSetting(i, complex(np.sqrt(i)), exact=table) for i in range(n))


def test__dataset__scan_dataset(table):
    """Grid accessors and the zero setting."""
    ds = ScanDataset(_settings(table), _settings(table), {"seed": 1})
    assert len(ds) == 3
    assert (ds.N, ds.K) == (2, 2)
    assert ds.intensities == pytest.approx([0, 1, 2])
    assert ds.zero_setting().index == 0
    assert ds.require_vacuum() == ds.vacuum
    assert ds.with_metadata(label="x").metadata == {"seed": 1, "label": "x"}
    counts = ds.settings[1].counts(100)
    assert counts.E == pytest.approx(100.0)


def test__dataset__scan_dataset_rejects(table):
    """Inconsistent datasets are data errors."""
    settings = _settings(table)
    with pytest.raises(DapsDataError):
        ScanDataset(settings[::-1])
    with pytest.raises(DapsDataError):
        ScanDataset(settings, settings[:2])
    other = ClickTable(np.full((2, 2), 0.25))
    with pytest.raises(DapsDataError):
        ScanDataset(settings + (ScanSetting(3, 2.0, exact=other),))
    with pytest.raises(DapsDataError) as excinfo:
        ScanSetting(4, 1.0)
    assert excinfo.value.setting == 4
    with pytest.raises(DapsDataError):
        ScanDataset(settings).require_vacuum()
    with pytest.raises(DapsDataError):
        ScanDataset(settings[1:]).zero_setting()
