import math

import numpy as np
import pytest

from ensembles.models import EnsembleConfig, Family
from services.empirical_service import EmpiricalService, FitFamily, covariance_spectrum
from services.experiment_service import ExperimentService


@pytest.fixture(scope="module")
def inverse_chi2_spectrum():
    """Объединенные собственные значения ансамбля INV_CHI2 с γ = 2 при c = 1/4."""
    config = EnsembleConfig(beta=1, n=50, m=200, gamma=2.0, family=Family.INV_CHI2)
    return ExperimentService(show_progress=False).pooled_eigenvalues(config, 200, seed=17)


@pytest.fixture(scope="module")
def wishart_spectrum():
    config = EnsembleConfig(beta=1, n=50, m=200)
    return ExperimentService(show_progress=False).pooled_eigenvalues(config, 200, seed=18)


class TestSelfConsistency:
    def test_recovers_generating_gamma(self, inverse_chi2_spectrum):
        result = EmpiricalService().fit_gamma(inverse_chi2_spectrum, 0.25, FitFamily.INV_CHI2)
        assert 1.7 <= result.gamma_hat <= 2.3
        assert result.objective >= 0.0
        assert all(later <= earlier for earlier, later in zip(result.search_trace, result.search_trace[1:]))

    def test_scale_invariance(self, inverse_chi2_spectrum):
        service = EmpiricalService()
        first = service.fit_gamma(inverse_chi2_spectrum, 0.25, FitFamily.INV_CHI2)
        second = service.fit_gamma(7.0 * inverse_chi2_spectrum, 0.25, FitFamily.INV_CHI2)
        assert second.gamma_hat == pytest.approx(first.gamma_hat, rel=1e-6)

    def test_marchenko_pastur_has_no_gamma(self, inverse_chi2_spectrum):
        service = EmpiricalService()
        result = service.fit_gamma(inverse_chi2_spectrum, 0.25, FitFamily.MP)
        assert result.gamma_hat is None
        assert result.search_trace == []
        payload = result.to_payload()
        assert payload["gamma_hat"] is None
        assert len(payload["fit_x"]) == len(payload["fit_y"]) == service.fit_bin_count(inverse_chi2_spectrum.size) == 44

    def test_gaussian_data_pushes_gamma_up(self, wishart_spectrum):
        service = EmpiricalService()
        superstat = service.fit_gamma(wishart_spectrum, 0.25, FitFamily.INV_CHI2)
        plain = service.fit_gamma(wishart_spectrum, 0.25, FitFamily.MP)
        assert superstat.gamma_hat >= 50.0
        assert superstat.objective <= 1.1 * plain.objective


class TestSyntheticReturns:
    def test_generator_reproduces_correlation_spectrum(self):
        service = EmpiricalService(seed=3)
        data = service.generate_synthetic_returns(40, 160, Family.INV_CHI2, gamma=2.0)
        assert (data.t_rows, data.n_cols) == (160, 40)
        assert data.labels[0] == "A0001"
        np.testing.assert_allclose(data.values.mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(data.values.std(axis=0), 1.0, rtol=1e-10)

        again = EmpiricalService(seed=3).generate_synthetic_returns(40, 160, Family.INV_CHI2, gamma=2.0)
        np.testing.assert_array_equal(data.values, again.values)

    def test_rejects_shape(self):
        with pytest.raises(ValueError):
            EmpiricalService().generate_synthetic_returns(10, 10, Family.INV_CHI2, gamma=2.0)

    def test_fit_on_synthetic_returns(self):
        service = EmpiricalService(seed=11)
        data = service.generate_synthetic_returns(200, 800, Family.INV_CHI2, gamma=2.0)
        spectrum = covariance_spectrum(data)
        assert spectrum.mean() == pytest.approx(1.0, rel=1e-10)
        result = service.fit_returns(data, FitFamily.INV_CHI2, trim=0)
        assert result.trimmed == 0
        assert result.c == pytest.approx(0.25)
        assert 1.6 <= result.gamma_hat <= 2.4


class TestMonteCarloFamily:
    def test_chi2_fit_is_deterministic(self, inverse_chi2_spectrum, quiet_settings, monkeypatch):
        monkeypatch.setattr(quiet_settings, "chi2_mc_samples", 20)
        monkeypatch.setattr(quiet_settings, "fit_coarse_points", 5)
        first = EmpiricalService(seed=1).fit_gamma(inverse_chi2_spectrum, 0.25, FitFamily.CHI2_MC)
        second = EmpiricalService(seed=1).fit_gamma(inverse_chi2_spectrum, 0.25, FitFamily.CHI2_MC)
        assert first.gamma_hat == second.gamma_hat
        assert quiet_settings.fit_gamma_min <= first.gamma_hat <= quiet_settings.fit_gamma_max
        assert all(later <= earlier for earlier, later in zip(first.search_trace, first.search_trace[1:]))
        assert math.isfinite(first.objective)
