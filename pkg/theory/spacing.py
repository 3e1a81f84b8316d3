"""
Законы распределения расстояний между соседними уровнями.

WD - сюрприз Вигнера-Дайсона, WL2 - точный закон для N = 2,
GEN - сюрприз, усредненный по обратному χ²-распределению масштаба.
Все кривые нормированы на единичную массу и единичное среднее.
"""

import math
from functools import lru_cache
from typing import Sequence, Tuple, Union

import numpy as np
from scipy import optimize

from config.settings import DYSON_INDICES, SurmiseConstants
from ensembles.models import SpectralSample
from numerics.quadrature import QuadratureSpec, integrate, log_integrate_peaked
from numerics.specfun import log_bessel_k, log_gamma
from theory.models import BranchValue, SpacingKind, SpacingModel
from utils.exceptions import DomainError

# Точки привязки констант κ₁, κ₂ асимптотик
SMALL_S_ANCHOR = 1e-4
LARGE_S_ANCHOR = 20.0


def _check_beta(beta: int) -> None:
    if beta not in DYSON_INDICES:
        raise DomainError(f"β должен быть одним из {DYSON_INDICES}, получено {beta}")


# --- Вигнер-Дайсон ---------------------------------------------------------

def wd_surmise(s: float, beta: int) -> float:
    """a_β s^β exp(-b_β s²)."""
    _check_beta(beta)
    if s < 0:
        return 0.0
    a, b = SurmiseConstants.WD_A[beta], SurmiseConstants.WD_B[beta]
    return a * s ** beta * math.exp(-b * s * s)


def solve_wd_constants(beta: int) -> Tuple[float, float]:
    """(a_β, b_β) из условий ∫P = 1 и ∫sP = 1, моменты считаются квадратурой."""
    _check_beta(beta)
    spec = QuadratureSpec(lower=0.0, upper=math.inf, breakpoints=(1.0, 3.0), relative_tolerance=1e-12)
    m0 = integrate(lambda s: s ** beta * math.exp(-s * s), spec)
    m1 = integrate(lambda s: s ** (beta + 1) * math.exp(-s * s), spec)
    b = (m1 / m0) ** 2
    a = b ** ((beta + 1) / 2.0) / m0
    return a, b


# --- Точный закон N = 2 ----------------------------------------------------

def wl2_nu_bar(beta: int, m: int) -> float:
    """ν̄ = β(m-1)/2 - 1."""
    return beta * (m - 1) / 2.0 - 1.0


def _wl2_exponents(beta: int, m: int, n_scale: float) -> Tuple[float, float, float]:
    nu_bar = wl2_nu_bar(beta, m)
    return beta + nu_bar + 0.5, nu_bar + 0.5, n_scale * beta


def wl2_log_normalization(beta: int, m: int, n_scale: float) -> float:
    """log C: ∫ s^μ K_ν(as) ds = 2^{μ-1} a^{-μ-1} Γ((1+μ+ν)/2) Γ((1+μ-ν)/2)."""
    mu, nu, a = _wl2_exponents(beta, m, n_scale)
    return (
        (mu + 1.0) * math.log(a)
        - (mu - 1.0) * math.log(2.0)
        - log_gamma((1.0 + mu + nu) / 2.0)
        - log_gamma((1.0 + mu - nu) / 2.0)
    )


def wl2_mean_closed(beta: int, m: int, n_scale: float) -> float:
    """Первый момент нерастянутого закона N = 2 в замкнутой форме."""
    mu, nu, a = _wl2_exponents(beta, m, n_scale)
    log_moment = (
        mu * math.log(2.0)
        - (mu + 2.0) * math.log(a)
        + log_gamma((2.0 + mu + nu) / 2.0)
        + log_gamma((2.0 + mu - nu) / 2.0)
    )
    return math.exp(wl2_log_normalization(beta, m, n_scale) + log_moment)


def _log_wl2_raw(s: float, beta: int, m: int, n_scale: float) -> float:
    mu, nu, a = _wl2_exponents(beta, m, n_scale)
    return wl2_log_normalization(beta, m, n_scale) + mu * math.log(s) + log_bessel_k(nu, a * s)


def _raw_spacing_spec(scale: float, lower_exponent: float) -> QuadratureSpec:
    return QuadratureSpec(
        lower=0.0,
        upper=math.inf,
        lower_exponent=lower_exponent,
        breakpoints=(0.5 * scale, scale, 3.0 * scale, 10.0 * scale),
        relative_tolerance=1e-11,
    )


@lru_cache(maxsize=256)
def wl2_mean_quadrature(beta: int, m: int, n_scale: float) -> float:
    """d = ∫ s·P(s) ds квадратурой."""
    mu, nu, a = _wl2_exponents(beta, m, n_scale)

    def first_moment(s: float) -> float:
        if s <= 0.0:
            return 0.0
        return s * math.exp(_log_wl2_raw(s, beta, m, n_scale))

    typical = max(mu + 1.0 - nu, 1.0) / a
    return integrate(first_moment, _raw_spacing_spec(typical, float(beta)))


def wl2_exact_spacing(s: float, beta: int, m: int, n_scale: float = 0.5, rescaled: bool = True) -> float:
    """C s^{β+ν̄+1/2} K_{ν̄+1/2}(nβs); при rescaled - P̂(s) = d·P(sd) с единичным средним."""
    _check_beta(beta)
    if m < 2:
        raise DomainError(f"m должно быть ≥ 2, получено {m}")
    if not n_scale > 0:
        raise DomainError(f"n_scale должен быть > 0, получено {n_scale}")
    if s <= 0:
        return 0.0
    if not rescaled:
        return math.exp(_log_wl2_raw(s, beta, m, n_scale))
    d = wl2_mean_quadrature(beta, m, float(n_scale))
    return d * math.exp(_log_wl2_raw(s * d, beta, m, n_scale))


# --- Обобщенный сюрприз ----------------------------------------------------

def gen_log_normalization(beta: int, gamma: float) -> float:
    """log C_γ = log[2(β/2)^{(β+1)/2} / (Γ(γ+1)Γ((β+1)/2))]."""
    half = beta / 2.0
    return (
        math.log(2.0)
        + (beta + 1) / 2.0 * math.log(half)
        - log_gamma(gamma + 1.0)
        - log_gamma((beta + 1) / 2.0)
    )


def mean_spacing(beta: int, gamma: float) -> float:
    """d_γ = (γ+1)Γ(β/2+1) / ((β/2)^{1/2} Γ((β+1)/2))."""
    _check_beta(beta)
    return (gamma + 1.0) * math.exp(
        log_gamma(beta / 2.0 + 1.0) - 0.5 * math.log(beta / 2.0) - log_gamma((beta + 1) / 2.0)
    )


def log_gen_surmise_raw(s: float, beta: int, gamma: float) -> float:
    """log P_γ(s) = log C_γ s^β ∫ ξ^{β-γ-1} exp(-1/ξ - βξ²s²/2) dξ, ξ = e^u."""
    if not s > 0:
        raise DomainError(f"s должно быть > 0, получено {s}")
    if not gamma > 0:
        raise DomainError(f"γ должно быть > 0, получено {gamma}")
    log_half_s2 = math.log(beta / 2.0) + 2.0 * math.log(s)
    power = beta - gamma

    def phi(u: float) -> float:
        # оба экспоненциальных слагаемых в лог-форме, без переполнения
        if -u > 700.0 or log_half_s2 + 2.0 * u > 700.0:
            return -math.inf
        return power * u - math.exp(-u) - math.exp(log_half_s2 + 2.0 * u)

    def slope(u: float) -> float:
        return power + math.exp(-u) - 2.0 * math.exp(min(log_half_s2 + 2.0 * u, 700.0))

    lower, upper = -1.0, 1.0
    while slope(lower) <= 0.0:
        lower *= 2.0
    while slope(upper) >= 0.0:
        upper *= 2.0
    peak = optimize.brentq(slope, lower, upper, xtol=1e-14, rtol=1e-14, maxiter=200)
    # при малых s кривизна в пике мала, ширину уточняет log_integrate_peaked
    width = 1.0 / math.sqrt(math.exp(-peak) + 4.0 * math.exp(log_half_s2 + 2.0 * peak))
    return gen_log_normalization(beta, gamma) + beta * math.log(s) + log_integrate_peaked(phi, peak, width)


def log_gen_surmise(s: float, beta: int, gamma: float) -> float:
    """log P̂_γ(s) = log d_γ + log P_γ(s·d_γ)."""
    _check_beta(beta)
    d = mean_spacing(beta, gamma)
    return math.log(d) + log_gen_surmise_raw(s * d, beta, gamma)


@lru_cache(maxsize=65536)
def _gen_surmise_cached(s: float, beta: int, gamma: float) -> float:
    log_value = log_gen_surmise(s, beta, gamma)
    return math.exp(log_value) if log_value > -745.0 else 0.0


def gen_surmise(s: float, beta: int, gamma: float) -> float:
    """Обобщенный сюрприз с единичной массой и единичным средним."""
    _check_beta(beta)
    if not gamma > 0:
        raise DomainError(f"γ должно быть > 0, получено {gamma}")
    if s <= 0:
        return 0.0
    return _gen_surmise_cached(float(s), beta, float(gamma))


@lru_cache(maxsize=256)
def mean_spacing_quadrature(beta: int, gamma: float) -> float:
    """d_γ = ∫ s·P_γ(s) ds квадратурой (проверка замкнутой формы)."""

    def first_moment(s: float) -> float:
        if s <= 0.0:
            return 0.0
        return s * math.exp(log_gen_surmise_raw(s, beta, gamma))

    scale = mean_spacing(beta, gamma)
    return integrate(first_moment, _raw_spacing_spec(scale, float(min(beta, gamma))))


def stretched_exponential_rate(beta: int, gamma: float) -> float:
    """α_γ = (3/2)(β d_γ²)^{1/3}; допускается γ = 0."""
    if gamma < 0:
        raise DomainError(f"γ должно быть ≥ 0, получено {gamma}")
    d = mean_spacing(beta, gamma)
    return 1.5 * (beta * d * d) ** (1.0 / 3.0)


@lru_cache(maxsize=256)
def _asymptotic_constants(beta: int, gamma: float) -> Tuple[float, float]:
    small_power = min(beta, gamma)
    large_power = (beta + 2.0 * gamma - 1.0) / 3.0
    alpha = stretched_exponential_rate(beta, gamma)
    log_kappa1 = log_gen_surmise(SMALL_S_ANCHOR, beta, gamma) - small_power * math.log(SMALL_S_ANCHOR)
    log_kappa2 = (
        log_gen_surmise(LARGE_S_ANCHOR, beta, gamma)
        - large_power * math.log(LARGE_S_ANCHOR)
        + alpha * LARGE_S_ANCHOR ** (2.0 / 3.0)
    )
    return log_kappa1, log_kappa2


def gen_surmise_asymptotics(s: float, beta: int, gamma: float) -> BranchValue:
    """κ₁ s^{min(β,γ)} при s < 1 и κ₂ s^{(β+2γ-1)/3} exp(-α_γ s^{2/3}) иначе."""
    _check_beta(beta)
    if not s > 0:
        raise DomainError(f"s должно быть > 0, получено {s}")
    log_kappa1, log_kappa2 = _asymptotic_constants(beta, float(gamma))
    if s < 1.0:
        return BranchValue(math.exp(log_kappa1 + min(beta, gamma) * math.log(s)), "small_s")
    alpha = stretched_exponential_rate(beta, gamma)
    log_value = log_kappa2 + (beta + 2.0 * gamma - 1.0) / 3.0 * math.log(s) - alpha * s ** (2.0 / 3.0)
    return BranchValue(math.exp(log_value), "large_s")


# --- Модели ------------------------------------------------------------------

def wd_model(beta: int) -> SpacingModel:
    _check_beta(beta)
    return SpacingModel(
        SpacingKind.WD,
        beta=beta,
        constants={"a": SurmiseConstants.WD_A[beta], "b": SurmiseConstants.WD_B[beta]},
    )


def wl2_model(beta: int, m: int, n_scale: float = 0.5) -> SpacingModel:
    _check_beta(beta)
    constants = {
        "C": math.exp(wl2_log_normalization(beta, m, n_scale)),
        "d": wl2_mean_quadrature(beta, m, float(n_scale)),
    }
    return SpacingModel(SpacingKind.WL2, beta=beta, m=m, n_scale=n_scale, constants=constants)


def gen_model(beta: int, gamma: float) -> SpacingModel:
    _check_beta(beta)
    constants = {
        "C_gamma": math.exp(gen_log_normalization(beta, gamma)),
        "d_gamma": mean_spacing(beta, gamma),
    }
    return SpacingModel(SpacingKind.GEN, beta=beta, gamma=gamma, constants=constants)


def evaluate_spacing(model: SpacingModel, s: float) -> float:
    """Значение нормированного закона модели в точке s."""
    if model.kind == SpacingKind.WD:
        return wd_surmise(s, model.beta)
    if model.kind == SpacingKind.WL2:
        return wl2_exact_spacing(s, model.beta, model.m, model.n_scale)
    return gen_surmise(s, model.beta, model.gamma)


def spacing_small_exponent(model: SpacingModel) -> float:
    """Показатель поведения P(s) ~ s^p при s → 0."""
    if model.kind == SpacingKind.GEN:
        return float(min(model.beta, model.gamma))
    return float(model.beta)


def spacing_moments(model: SpacingModel) -> Tuple[float, float]:
    """Масса и среднее закона квадратурой."""
    spec = QuadratureSpec(
        lower=0.0,
        upper=math.inf,
        lower_exponent=spacing_small_exponent(model),
        breakpoints=(0.5, 1.0, 2.0, 4.0),
        relative_tolerance=1e-10,
    )
    mass = integrate(lambda s: evaluate_spacing(model, s), spec)
    mean = integrate(lambda s: s * evaluate_spacing(model, s), spec)
    return mass, mean


# --- Выборочные расстояния ---------------------------------------------------

SpectraInput = Union[Sequence[SpectralSample], np.ndarray]


def _as_matrix(samples: SpectraInput) -> np.ndarray:
    if isinstance(samples, np.ndarray):
        spectra = np.asarray(samples, dtype=float)
    else:
        spectra = np.array([sample.eigenvalues for sample in samples], dtype=float)
    if spectra.ndim != 2:
        raise DomainError("Ожидалась таблица спектров R×N")
    return spectra


def individual_spacing(samples: SpectraInput, k: int, min_samples: int = 100) -> np.ndarray:
    """s_k = (λ_k - λ_{k-1}) / ⟨λ_k - λ_{k-1}⟩, k = 2..n (нумерация с единицы)."""
    spectra = _as_matrix(samples)
    count, n = spectra.shape
    if not 2 <= k <= n:
        raise DomainError(f"k должно лежать в [2, {n}], получено {k}")
    if count < min_samples:
        raise DomainError(f"Нужно не меньше {min_samples} выборок, получено {count}")
    gaps = spectra[:, k - 1] - spectra[:, k - 2]
    if np.any(gaps < 0):
        raise DomainError("Спектры должны быть упорядочены по возрастанию")
    return gaps / gaps.mean()
