import math

import numpy as np
import pytest
from scipy import special

from config.settings import SurmiseConstants
from theory.models import SpacingKind, SpacingModel
from theory.spacing import (
    evaluate_spacing,
    gen_model,
    gen_surmise,
    gen_surmise_asymptotics,
    individual_spacing,
    log_gen_surmise,
    mean_spacing,
    mean_spacing_quadrature,
    solve_wd_constants,
    spacing_moments,
    spacing_small_exponent,
    stretched_exponential_rate,
    wd_model,
    wd_surmise,
    wl2_exact_spacing,
    wl2_mean_closed,
    wl2_mean_quadrature,
    wl2_model,
    wl2_nu_bar,
)
from utils.exceptions import DomainError


class TestWignerDyson:
    @pytest.mark.parametrize("beta", [1, 2, 4])
    def test_constants_solve_moment_conditions(self, beta):
        a, b = solve_wd_constants(beta)
        assert a == pytest.approx(SurmiseConstants.WD_A[beta], rel=1e-9)
        assert b == pytest.approx(SurmiseConstants.WD_B[beta], rel=1e-9)

    @pytest.mark.parametrize("beta", [1, 2, 4])
    def test_unit_mass_and_mean(self, beta):
        mass, mean = spacing_moments(wd_model(beta))
        assert mass == pytest.approx(1.0, abs=1e-9)
        assert mean == pytest.approx(1.0, abs=1e-9)

    def test_goe_closed_form(self):
        s = 0.8
        assert wd_surmise(s, 1) == pytest.approx(math.pi / 2 * s * math.exp(-math.pi * s * s / 4), rel=1e-14)
        assert wd_surmise(-1.0, 1) == 0.0

    def test_rejects_beta(self):
        with pytest.raises(DomainError):
            wd_surmise(1.0, 3)


class TestExactTwoByTwo:
    def test_nu_bar(self):
        assert wl2_nu_bar(1, 2) == -0.5
        assert wl2_nu_bar(2, 2) == 0.0

    def test_real_square_shape(self):
        # β = 1, m = 2: P ∝ s·K₀(s/2)
        ratios = [wl2_exact_spacing(s, 1, 2, rescaled=False) / (s * special.k0(0.5 * s)) for s in (0.1, 1.0, 3.0, 7.0)]
        np.testing.assert_allclose(ratios, ratios[0], rtol=1e-9)

    def test_complex_square_shape(self):
        # β = 2, m = 2: P ∝ s²e^{-s}
        ratios = [wl2_exact_spacing(s, 2, 2, rescaled=False) / (s * s * math.exp(-s)) for s in (0.1, 1.0, 3.0, 7.0)]
        np.testing.assert_allclose(ratios, ratios[0], rtol=1e-9)

    @pytest.mark.parametrize("beta,m", [(1, 2), (1, 5), (2, 3), (4, 2)])
    def test_unit_mass_and_mean(self, beta, m):
        mass, mean = spacing_moments(wl2_model(beta, m))
        assert mass == pytest.approx(1.0, abs=1e-7)
        assert mean == pytest.approx(1.0, abs=1e-7)

    @pytest.mark.parametrize("beta,m", [(1, 2), (2, 7), (4, 3)])
    def test_mean_closed_form(self, beta, m):
        assert wl2_mean_quadrature(beta, m, 0.5) == pytest.approx(wl2_mean_closed(beta, m, 0.5), rel=1e-8)

    @pytest.mark.parametrize("kwargs", [{"m": 1}, {"n_scale": 0.0}, {"beta": 3}])
    def test_rejects(self, kwargs):
        params = {"s": 1.0, "beta": 1, "m": 2}
        params.update(kwargs)
        with pytest.raises(DomainError):
            wl2_exact_spacing(**params)

    def test_zero_at_origin(self):
        assert wl2_exact_spacing(0.0, 1, 3) == 0.0


class TestGeneralizedSurmise:
    @pytest.mark.parametrize("gamma", [0.5, 7.0, 50.0])
    def test_mean_spacing_goe(self, gamma):
        assert mean_spacing(1, gamma) == pytest.approx(math.sqrt(math.pi / 2) * (gamma + 1.0), rel=1e-12)

    @pytest.mark.parametrize("beta", [1, 2, 4])
    @pytest.mark.parametrize("gamma", [0.5, 7.0, 50.0])
    def test_mean_spacing_quadrature(self, beta, gamma):
        assert mean_spacing_quadrature(beta, gamma) == pytest.approx(mean_spacing(beta, gamma), rel=1e-8)

    @pytest.mark.parametrize("beta,gamma", [(1, 1.0), (1, 7.0), (2, 10.0), (4, 50.0), (2, 0.5)])
    def test_unit_mass_and_mean(self, beta, gamma):
        mass, mean = spacing_moments(gen_model(beta, gamma))
        assert mass == pytest.approx(1.0, abs=1e-7)
        assert mean == pytest.approx(1.0, abs=1e-7)

    def test_large_gamma_recovers_wigner_dyson(self):
        grid = np.linspace(0.0, 4.0, 81)
        deviation = max(abs(gen_surmise(float(s), 1, 1e3) - wd_surmise(float(s), 1)) for s in grid)
        assert deviation <= 0.01

    def test_small_s_exponent(self):
        beta, gamma = 2, 0.5
        slope = (log_gen_surmise(1e-5, beta, gamma) - log_gen_surmise(1e-6, beta, gamma)) / math.log(10.0)
        assert slope == pytest.approx(0.5, rel=0.02)
        assert spacing_small_exponent(gen_model(beta, gamma)) == 0.5
        assert spacing_small_exponent(wd_model(4)) == 4.0

    @pytest.mark.parametrize("beta,gamma", [(1, 0.5), (1, 1.0), (2, 1.0), (4, 2.0), (1, 7.0)])
    def test_finite_at_tiny_s(self, beta, gamma):
        tiny = gen_surmise(1e-30, beta, gamma)
        small = gen_surmise(1e-16, beta, gamma)
        assert math.isfinite(tiny) and tiny >= 0.0
        assert math.isfinite(small) and small > 0.0
        assert tiny <= small

    def test_tiny_s_at_gamma_equal_beta(self):
        # P ~ s^β log(1/s): наклон в лог-шкале чуть меньше β
        slope = (log_gen_surmise(1e-16, 1, 1.0) - log_gen_surmise(1e-30, 1, 1.0)) / (14.0 * math.log(10.0))
        assert 0.9 < slope < 1.0

    @pytest.mark.parametrize("beta,gamma", [(1, 0.5), (4, 2.0)])
    def test_tiny_s_exponent(self, beta, gamma):
        slope = (log_gen_surmise(1e-16, beta, gamma) - log_gen_surmise(1e-30, beta, gamma)) / (14.0 * math.log(10.0))
        assert slope == pytest.approx(gamma, abs=1e-3)

    def test_stretched_exponential_tail(self):
        beta, gamma = 1, 7.0
        alpha = stretched_exponential_rate(beta, gamma)

        def reduced(s):
            return log_gen_surmise(s, beta, gamma) + alpha * s ** (2.0 / 3.0)

        slope = (reduced(200.0) - reduced(100.0)) / math.log(2.0)
        assert slope == pytest.approx((beta + 2.0 * gamma - 1.0) / 3.0, rel=0.05)

    def test_rate_at_gamma_zero(self):
        assert stretched_exponential_rate(1, 0.0) == pytest.approx(1.5 * (math.pi / 2.0) ** (1.0 / 3.0), rel=1e-12)
        with pytest.raises(DomainError):
            stretched_exponential_rate(1, -1.0)

    def test_asymptotics_anchor_exactly(self):
        beta, gamma = 1, 3.0
        small = gen_surmise_asymptotics(1e-4, beta, gamma)
        large = gen_surmise_asymptotics(20.0, beta, gamma)
        assert small.branch == "small_s"
        assert large.branch == "large_s"
        assert small.value == pytest.approx(gen_surmise(1e-4, beta, gamma), rel=1e-10)
        assert large.value == pytest.approx(gen_surmise(20.0, beta, gamma), rel=1e-10)
        with pytest.raises(DomainError):
            gen_surmise_asymptotics(0.0, beta, gamma)

    def test_rejects(self):
        with pytest.raises(DomainError):
            gen_surmise(1.0, 1, 0.0)
        assert gen_surmise(0.0, 1, 1.0) == 0.0


class TestModels:
    def test_constants_exposed(self):
        assert wd_model(2).constants == {"a": SurmiseConstants.WD_A[2], "b": SurmiseConstants.WD_B[2]}
        assert gen_model(1, 2.0).constants["d_gamma"] == pytest.approx(mean_spacing(1, 2.0))
        assert wl2_model(1, 3).label() == "wl2(beta=1, m=3)"

    @pytest.mark.parametrize("kwargs", [
        {"kind": SpacingKind.WD, "beta": 3},
        {"kind": SpacingKind.WL2, "beta": 1, "m": 1},
        {"kind": SpacingKind.GEN, "beta": 1, "gamma": 0.0},
        {"kind": SpacingKind.WD, "beta": 1, "constants": {"a": -1.0}},
    ])
    def test_rejects_inconsistent(self, kwargs):
        with pytest.raises(DomainError):
            SpacingModel(**kwargs)

    def test_evaluate_dispatch(self):
        assert evaluate_spacing(wd_model(1), 0.7) == wd_surmise(0.7, 1)
        assert evaluate_spacing(gen_model(2, 3.0), 0.7) == gen_surmise(0.7, 2, 3.0)
        assert evaluate_spacing(wl2_model(2, 4), 0.7) == wl2_exact_spacing(0.7, 2, 4)


class TestIndividualSpacing:
    def test_unit_mean(self, rng):
        spectra = np.sort(rng.exponential(size=(500, 6)).cumsum(axis=1), axis=1)
        values = individual_spacing(spectra, 3)
        assert values.shape == (500,)
        assert values.mean() == pytest.approx(1.0, rel=1e-12)
        np.testing.assert_allclose(values * (spectra[:, 2] - spectra[:, 1]).mean(), spectra[:, 2] - spectra[:, 1])

    @pytest.mark.parametrize("k", [1, 7])
    def test_rejects_k(self, rng, k):
        with pytest.raises(DomainError):
            individual_spacing(np.sort(rng.random((200, 6)), axis=1), k)

    def test_rejects_small_ensemble(self, rng):
        with pytest.raises(DomainError):
            individual_spacing(np.sort(rng.random((99, 4)), axis=1), 2)

    def test_rejects_unsorted(self):
        spectra = np.tile([3.0, 1.0, 2.0], (100, 1))
        with pytest.raises(DomainError):
            individual_spacing(spectra, 2)
