"""
Приемочные прогоны полного масштаба. Долгие, запускаются через `pytest -m slow`.
"""

import io
import json

import numpy as np
import pytest

from ensembles.models import EnsembleConfig, Family
from harness.statistics import cdf_of, ks_between_cdfs, ks_two_sample
from main import main
from services.experiment_service import ExperimentService
from services.selfcheck_service import SelfCheckService
from theory.spacing import gen_model, wd_model

pytestmark = pytest.mark.slow


class TestDensityReproduction:
    @pytest.mark.parametrize("gamma", [1.0, 10.0])
    def test_inverse_chi2_histogram(self, gamma):
        config = EnsembleConfig(beta=1, n=10, m=40, gamma=gamma, family=Family.INV_CHI2)
        report = ExperimentService().run_density_experiment(config, 50_000, seed=3)
        # при N = 10 гистограмма отличается от предела N → ∞ на краях носителя, сравниваем по KS
        assert report.ks <= 0.01

    def test_mean_eigenvalue_law(self):
        config = EnsembleConfig(beta=1, n=10, m=40, gamma=2.0, family=Family.INV_CHI2)
        assert config.theoretical_mean_eigenvalue() == pytest.approx(30.0)
        batch = ExperimentService().sample_spectra(config, 10_000, seed=11)
        check = ExperimentService.mean_eigenvalue_check(batch.spectra, config)
        assert check.passed, check


class TestSpacingReproduction:
    def test_two_by_two_exact_law(self):
        config = EnsembleConfig(beta=1, n=2, m=2)
        report = ExperimentService().run_spacing_experiment(config, k=2, R=100_000, seed=4)
        assert report.theory_label.startswith("wl2")
        assert report.ks <= 0.01

    @pytest.mark.parametrize("n", [10, 13])
    @pytest.mark.parametrize("k", [5, 7, 8])
    def test_bulk_spacing_closer_to_surmise(self, n, k):
        config = EnsembleConfig(beta=1, n=n, m=n)
        report = ExperimentService().run_spacing_experiment(config, k=k, R=20_000, seed=6)
        assert report.ks < report.ks_alternatives["wl2"]

    def test_superstatistical_spacing(self):
        config = EnsembleConfig(beta=1, n=10, m=15, gamma=7.0, family=Family.INV_CHI2)
        report = ExperimentService().run_spacing_experiment(config, k=5, R=100_000, seed=8)
        assert report.ks <= 0.02

    def test_distance_to_surmise_shrinks_with_gamma(self):
        grid = np.linspace(0.0, 8.0, 400)
        surmise = cdf_of(wd_model(1))
        distances = [ks_between_cdfs(cdf_of(gen_model(1, gamma)), surmise, grid) for gamma in (1.0, 7.0, 90.0)]
        assert distances[0] > distances[1] > distances[2]


class TestNumerics:
    def test_dense_matches_tridiagonal(self):
        config = EnsembleConfig(beta=1, n=10, m=10)
        dense = ExperimentService(method="dense").sample_spectra(config, 10_000, seed=1).spectra
        tridiagonal = ExperimentService(method="tridiagonal").sample_spectra(config, 10_000, seed=2).spectra
        assert ks_two_sample(dense, tridiagonal) <= 0.01

    def test_full_selfcheck(self):
        results = SelfCheckService(quick=False).run()
        assert [r.name for r in results if not r.passed] == []


def test_synthetic_returns_fit_from_cli(tmp_path):
    target = tmp_path / "returns.csv"
    code = main(["synth", "--n", "400", "--t", "1600", "--gamma", "2", "--seed", "17", "--out", str(target)],
                stdout=io.StringIO())
    assert code == 0

    stdout = io.StringIO()
    code = main(["fit", "--input", str(target), "--family", "invchi2", "--trim", "0"], stdout=stdout)
    assert code == 0
    assert 1.7 <= json.loads(stdout.getvalue())["gamma_hat"] <= 2.3
