"""Tests for simple use cases of the public api."""

import os

import numpy as np
import pytest

import dapsim
from dapsim.api import ANALYSIS_MODES
from dapsim.core import DapsConfigError, DapsDataError, DapsValueError
from dapsim.core.experiment import AnalysisOptions, EstimateOptions
from dapsim.core.fock import StateSpec

EXPERIMENTS = os.path.join("test", "fixtures", "experiments")


def _load(name, **overrides):
    return dapsim.load_experiment(
        config_path=os.path.join(EXPERIMENTS, name),
        overrides=overrides or None,
        path=EXPERIMENTS,
    )


@pytest.fixture(scope="module")
def fock1_dataset():
    """The single photon experiment, simulated exactly."""
    datasets = dapsim.simulate(
        _load("fock1_exact.cfg"), allow_process_parallelism=False
    )
    assert list(datasets) == ["signal"]
    return datasets["signal"]


def test__api__load_experiment():
    """Config files become a validated experiment."""
    experiment = _load("fock1_exact.cfg")
    assert experiment.state == StateSpec.fock(1)
    assert experiment.seed == 11
    assert experiment.multiplex.N == 2
    assert experiment.trials is None
    np.testing.assert_allclose(experiment.lo_grid ** 2, np.arange(7) * 0.5)


def test__api__load_experiment_overrides():
    """Overrides beat the files."""
    assert _load("fock1_exact.cfg", seed=4).seed == 4
    with pytest.raises(DapsConfigError):
        _load("fock1_exact.cfg", seed=-1)


def test__api__simulate(fock1_dataset):
    """A plain run gives one dataset with its provenance."""
    assert len(fock1_dataset) == 7
    assert fock1_dataset.vacuum is not None
    assert fock1_dataset.metadata["experiment"]["seed"] == 11
    assert fock1_dataset.metadata["state"] == {"variant": "fock", "m": 1}


def test__api__simulate_heralded():
    """Heralded runs give one dataset per herald outcome."""
    datasets = dapsim.simulate(
        _load("heralded_ideal.cfg"), allow_process_parallelism=False
    )
    assert sorted(datasets) == ["kh0", "kh1"]
    heralding = datasets["kh1"].metadata["heralding"]
    assert heralding["k_h"] == 1
    # Pair numbers follow (1 - lambda^2) lambda^(2n) with lambda = 0.3.
    assert heralding["probability"] == pytest.approx(0.91 * 0.09, rel=1e-9)
    assert datasets["kh0"].vacuum == datasets["kh1"].vacuum


def test__api__estimate(fock1_dataset):
    """The default estimate flags the single photon."""
    result = dapsim.estimate(fock1_dataset)
    assert result.g_nonclassical
    assert result.mu_nonclassical
    assert result.zs == [-1.5, 0.0, 0.5, 1.0]
    assert result.settings[0].gz[-1.5].mean == pytest.approx(-1.0, abs=1e-9)


def test__api__estimate_options(fock1_dataset):
    """Options select z values and the error method."""
    options = EstimateOptions(
        zs=(0.0,), error_method="bootstrap", bootstrap_resamples=5
    )
    result = dapsim.estimate(fock1_dataset, options, seed=2)
    assert result.zs == [0.0]
    assert result.g_min.g.method == "bootstrap"


def test__api__analyze_fit(fock1_dataset):
    """The fit recovers the single photon polynomial in DI units."""
    result = dapsim.analyze([fock1_dataset], "fit")
    (res,) = result.record["results"]
    assert res["label"] == "dataset0"
    assert res["degree"] == 1
    assert res["vacuum"]["b"] == pytest.approx(2.5, abs=1e-5)
    assert res["model"]["b"] == pytest.approx(2.5, abs=1e-5)
    np.testing.assert_allclose(res["model"]["f"], [-1.0, 5.0], atol=1e-4)
    assert sorted(result.tables) == ["dataset0_curve", "dataset0_fit"]
    header, rows = result.tables["dataset0_fit"]
    assert header[0] == "setting"
    assert len(rows) == 7


def test__api__analyze_predict(fock1_dataset):
    """The stored state is predicted from the vacuum and agrees."""
    result = dapsim.analyze([fock1_dataset], "predict", labels=["fock1"])
    (res,) = result.record["results"]
    assert res["state"] == {"variant": "fock", "m": 1}
    assert res["scale"] == pytest.approx(0.2, abs=1e-9)
    assert res["comparison"]["relative_linf"] < 1e-6
    assert sorted(result.tables) == ["fock1_estimated", "fock1_predicted"]


def test__api__analyze_predict_other_state(fock1_dataset):
    """Predicting the wrong state shows up in the comparison."""
    result = dapsim.analyze(
        [fock1_dataset], "predict", state=StateSpec.fock(2), x_max=0.3
    )
    comparison = result.record["results"][0]["comparison"]
    assert comparison["relative_linf"] > 0.1
    assert all(p["x"] <= 0.3 for p in comparison["points"])


def test__api__analyze_discriminate(fock1_dataset):
    """A dataset against itself sits on the diagonal."""
    result = dapsim.analyze(
        [fock1_dataset, fock1_dataset], "discriminate", labels=["a", "b"]
    )
    probs = np.array(result.record["result"]["probabilities"])
    assert probs.shape == (2, 2)
    np.testing.assert_allclose(probs, probs[0, 0])
    header, rows = result.tables["discrimination"]
    assert header == ["", "a", "b"]
    assert [row[0] for row in rows] == ["a", "b"]


def test__api__analyze_optimal_z(fock1_dataset):
    """The optimal z search runs on the beta = 0 setting."""
    options = AnalysisOptions(z_min=-2.0, z_max=0.0, z_step=0.5)
    result = dapsim.analyze([fock1_dataset], "optimal-z", options)
    (res,) = result.record["results"]
    assert res["negative"]
    assert res["z"] == -2.0
    # 1 - 0.8 (1 - z) < 0 below z = -0.25.
    assert res["onset_z"] == -0.5
    assert result.tables == {}


def test__api__analyze_rejects(fock1_dataset):
    """Unknown modes, no datasets and mismatched labels are rejected."""
    assert "fit" in ANALYSIS_MODES
    with pytest.raises(DapsValueError):
        dapsim.analyze([fock1_dataset], "bayes")
    with pytest.raises(DapsDataError):
        dapsim.analyze([], "fit")
    with pytest.raises(DapsValueError):
        dapsim.analyze([fock1_dataset], "fit", labels=["a", "b"])


def test__api__analyze_predict_needs_frontend(fock1_dataset):
    """Predictions need the beam splitter in the metadata."""
    bare = fock1_dataset.with_metadata(frontend=None)
    with pytest.raises(DapsDataError):
        dapsim.analyze([bare], "predict")
