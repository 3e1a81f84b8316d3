import math

import numpy as np
import pytest

from ensembles.models import EnsembleConfig, Family
from harness.models import ExperimentReport, Histogram, MeanCheck
from harness.statistics import (
    build_histogram,
    cdf_of,
    chi2_per_bin,
    ks_between_cdfs,
    ks_statistic,
    ks_two_sample,
    max_bin_deviation,
)
from numerics.quadrature import QuadratureSpec, integrate
from theory.density import evaluate_density
from theory.models import DensityModel
from theory.spacing import gen_model, wd_model
from utils.exceptions import DomainError


def goe_cdf(s):
    return 1.0 - np.exp(-np.pi * np.asarray(s) ** 2 / 4.0)


def uniform_histogram(counts):
    counts = np.asarray(counts, dtype=np.int64)
    edges = np.linspace(0.0, 1.0, len(counts) + 1)
    density = counts / (counts.sum() * np.diff(edges))
    return Histogram(bin_edges=edges, counts=counts, density=density, n_values=int(counts.sum()))


class TestHistogram:
    def test_unit_mass_when_everything_in_range(self, rng):
        values = rng.random(1000)
        histogram = build_histogram(values, bins=10, upper=1.0)
        assert histogram.n_values == 1000
        assert histogram.overflow == 0
        assert histogram.mass() == pytest.approx(1.0, abs=1e-12)

    def test_default_range_reports_overflow(self, rng):
        values = rng.exponential(size=20_000)
        histogram = build_histogram(values, bins=40)
        assert histogram.total == values.size
        assert histogram.overflow > 0
        assert histogram.counts.sum() == histogram.n_values
        assert histogram.mass() < 1.0
        assert histogram.bin_edges[0] == 0.0
        assert len(histogram.centers) == 40

    def test_rejects_empty(self):
        with pytest.raises(DomainError):
            build_histogram([])

    def test_rejects_non_positive_range(self):
        with pytest.raises(DomainError):
            build_histogram([0.0, 0.0, 0.0])


class TestKolmogorovSmirnov:
    def test_two_points_at_median(self):
        median = math.sqrt(4.0 * math.log(2.0) / math.pi)
        assert ks_statistic([median, median], goe_cdf) == pytest.approx(0.5, abs=1e-12)

    def test_samples_from_the_law(self, rng):
        u = rng.random(100_000)
        values = np.sqrt(-4.0 * np.log1p(-u) / np.pi)
        assert ks_statistic(values, goe_cdf) <= 0.0065

    def test_rejects_too_few_values(self):
        with pytest.raises(DomainError):
            ks_statistic([1.0], goe_cdf)

    def test_rejects_non_monotone_cdf(self):
        with pytest.raises(DomainError):
            ks_statistic(np.linspace(0.0, 5.0, 50), np.sin)

    def test_scalar_only_cdf(self):
        values = [0.2, 0.9, 1.4]
        expected = ks_statistic(values, goe_cdf)
        assert ks_statistic(values, lambda s: float(goe_cdf(float(s)))) == pytest.approx(expected, rel=1e-14)

    def test_two_sample(self, rng):
        values = rng.random(500)
        assert ks_two_sample(values, values) == 0.0
        assert ks_two_sample(values, values + 2.0) == 1.0

    def test_between_cdfs(self):
        grid = np.linspace(0.0, 3.0, 301)
        assert ks_between_cdfs(goe_cdf, goe_cdf, grid) == 0.0
        assert ks_between_cdfs(lambda x: np.clip(x, 0, 1), lambda x: np.clip(x / 2, 0, 1), grid) == pytest.approx(0.5)


class TestTabulatedCDF:
    def test_wigner_dyson_closed_form(self):
        cdf = cdf_of(wd_model(1))
        grid = np.linspace(0.0, 5.0, 101)
        np.testing.assert_allclose(cdf(grid), goe_cdf(grid), atol=1e-7)
        assert cdf.mass == pytest.approx(1.0, abs=1e-9)

    def test_marchenko_pastur_mass(self):
        cdf = cdf_of(DensityModel.mp(1.0))
        assert cdf(4.0) == pytest.approx(1.0, abs=1e-6)
        assert cdf(-1.0) == 0.0
        assert cdf(10.0) == cdf.mass

    def test_generalized_against_direct_quadrature(self):
        model = DensityModel.generalized(2.0)
        spec = QuadratureSpec(lower=0.0, upper=1.0, lower_exponent=-0.5)
        expected = integrate(lambda x: evaluate_density(model, x), spec)
        assert cdf_of(model)(1.0) == pytest.approx(expected, abs=1e-8)

    @pytest.mark.parametrize("model", [DensityModel.generalized(2.0, 0.4), DensityModel.mp(0.4), gen_model(1, 2.0)])
    def test_monotone_with_unit_mass(self, model):
        cdf = cdf_of(model)
        values = cdf(np.linspace(0.0, 20.0, 500))
        assert np.all(np.diff(values) >= -1e-12)
        assert cdf.mass == pytest.approx(1.0, abs=1e-6)


class TestBinMetrics:
    def test_max_bin_deviation_respects_min_count(self):
        histogram = uniform_histogram([500, 500, 10, 0])
        deviation = max_bin_deviation(histogram, lambda x: 1.0, min_count=100)
        # Плотность в первых бинах 500/(1010·0.25)
        assert deviation == pytest.approx(500.0 / (1010.0 * 0.25) - 1.0)

    def test_max_bin_deviation_without_populated_bins(self):
        with pytest.raises(DomainError):
            max_bin_deviation(uniform_histogram([5, 5]), lambda x: 1.0, min_count=100)

    def test_chi2_per_bin(self):
        assert chi2_per_bin(uniform_histogram([250, 250, 250, 250]), lambda x: x, min_count=1) == 0.0
        value = chi2_per_bin(uniform_histogram([300, 200, 250, 250]), lambda x: x, min_count=1)
        assert value == pytest.approx((10.0 + 10.0) / 4.0)

    def test_chi2_without_populated_bins(self):
        with pytest.raises(DomainError):
            chi2_per_bin(uniform_histogram([1, 1]), lambda x: x, min_count=100)


class TestExperimentReport:
    def test_json_is_canonical(self):
        config = EnsembleConfig(beta=1, n=4, m=8, gamma=2.0, family=Family.INV_CHI2)
        histogram = uniform_histogram([3, 1, 2])
        report = ExperimentReport(
            kind="density",
            config=config,
            seed=42,
            R=100,
            histogram=histogram,
            theory_label="gen_rect(gamma=2, c=0.5)",
            theory_x=histogram.centers.tolist(),
            theory_y=[0.5, 1.0, 1.5],
            ks=0.1,
            chi2_per_bin=1.25,
            max_deviation=0.3,
            runtime_seconds=0.5,
            mean_check=MeanCheck(observed=6.0, expected=6.0, sigma=0.1, passed=True),
            ks_alternatives={"mp": 0.2},
        )
        text = report.to_json()
        assert ExperimentReport.from_json(text).to_json() == text
        assert text.endswith("}\n")
        for key in ("config", "seed", "R", "bin_edges", "counts", "density", "theory_x", "theory_y", "ks", "runtime_seconds"):
            assert f'"{key}"' in text

    def test_mean_check_z_score(self):
        assert MeanCheck(observed=1.3, expected=1.0, sigma=0.1, passed=True).z_score == pytest.approx(3.0)
        assert MeanCheck(observed=1.0, expected=1.0, sigma=0.0, passed=False).z_score == math.inf
