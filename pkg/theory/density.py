"""
Макроскопические спектральные плотности: закон Марченко-Пастура и его
суперстатистические обобщения ρ_γ при c = 1 и c < 1.

Переменная x - собственное значение, перенормированное на единичное среднее.
Все обобщенные плотности считаются в логарифмической шкале.
"""

import math
from functools import lru_cache
from typing import Tuple

import numpy as np

from numerics.quadrature import QuadratureSpec, integrate, integrate_detailed
from numerics.specfun import log_gamma, log_tricomi_u, upper_incomplete_gamma
from theory.models import BranchValue, DensityKind, DensityModel, SupportBounds
from utils.exceptions import DomainError

SQRT_PI = math.sqrt(math.pi)


def support_bounds(c: float) -> SupportBounds:
    """X± = (c^{-1/2} ± 1)²."""
    if not 0 < c <= 1:
        raise DomainError(f"c должно лежать в (0, 1], получено {c}")
    root = 1.0 / math.sqrt(c)
    return SupportBounds(lower=(root - 1.0) ** 2, upper=(root + 1.0) ** 2)


def density_support(model: DensityModel) -> SupportBounds:
    """Носитель плотности по x."""
    if model.kind == DensityKind.MP:
        bounds = support_bounds(model.c)
        return SupportBounds(model.c * bounds.lower, model.c * bounds.upper)
    return SupportBounds(0.0, math.inf)


def mp_density(x: float, c: float) -> float:
    """Закон Марченко-Пастура с единичным средним; вне носителя 0."""
    if not 0 < c <= 1:
        raise DomainError(f"c должно лежать в (0, 1], получено {c}")
    if c == 1:
        if not 0 < x < 4:
            return 0.0
        return math.sqrt(4.0 / x - 1.0) / (2.0 * math.pi)
    bounds = support_bounds(c)
    lower, upper = c * bounds.lower, c * bounds.upper
    if not lower < x < upper:
        return 0.0
    return math.sqrt((x - lower) * (upper - x)) / (2.0 * math.pi * c * x)


def _require_positive(x: float, gamma: float) -> None:
    if not x > 0:
        raise DomainError(f"x должно быть > 0, получено {x}")
    if not gamma > 0:
        raise DomainError(f"γ должно быть > 0, получено {gamma}")


@lru_cache(maxsize=65536)
def log_rho_gamma_square_closed(x: float, gamma: float) -> float:
    """log ρ_γ(x) при c = 1 через функцию Трикоми."""
    _require_positive(x, gamma)
    z = (gamma + 1.0) * x / 4.0
    return (
        (gamma + 1.0) * math.log(gamma + 1.0)
        - math.log(4.0 * SQRT_PI)
        - log_gamma(gamma + 1.0)
        - z
        + gamma * math.log(x / 4.0)
        + log_tricomi_u(1.5, gamma + 1.5, z)
    )


def rho_gamma_square_closed(x: float, gamma: float) -> float:
    return math.exp(log_rho_gamma_square_closed(x, gamma))


def rho_gamma_square_integral(x: float, gamma: float) -> float:
    """ρ_γ(x) при c = 1 прямой квадратурой по t ∈ (0, ∞)."""
    _require_positive(x, gamma)
    z = (gamma + 1.0) * x / 4.0

    def log_integrand(t: float) -> float:
        return -z * t + (gamma - 1.0) * math.log1p(t) + 0.5 * math.log(t)

    shifted = z - gamma + 0.5
    peak = (-shifted + math.sqrt(shifted * shifted + 2.0 * z)) / (2.0 * z)
    curvature = (gamma - 1.0) / (1.0 + peak) ** 2 + 0.5 / peak ** 2
    width = 1.0 / math.sqrt(curvature) if curvature > 0 else max(peak, 1.0)
    top = log_integrand(peak)

    def integrand(t: float) -> float:
        if t <= 0.0:
            return 0.0
        return math.exp(log_integrand(t) - top)

    spec = QuadratureSpec(
        lower=0.0,
        upper=math.inf,
        lower_exponent=0.5,
        breakpoints=(peak, peak + 5.0 * width, peak + 30.0 * width),
    )
    integral = integrate(integrand, spec)
    log_value = (
        (gamma + 1.0) * math.log(gamma + 1.0)
        - math.log(2.0 * math.pi)
        - log_gamma(gamma + 1.0)
        + gamma * math.log(x / 4.0)
        - z
        + top
        + math.log(integral)
    )
    return math.exp(log_value)


def _rect_log_integral(k: float, gamma: float, c: float, power: float) -> float:
    """log ∫_{X₋}^{X₊} t^{-power} e^{-k/t} √((t-X₋)(X₊-t)) dt с заменой t = X₋ + Δ sin²θ."""
    bounds = support_bounds(c)
    lower, span = bounds.lower, bounds.upper - bounds.lower

    def log_kernel(t: float) -> float:
        return -power * math.log(t) - k / t

    peak = k / power if k > 0 else lower
    peak = min(max(peak, lower), bounds.upper)
    top = log_kernel(peak)

    def integrand(theta: float) -> float:
        s, co = math.sin(theta), math.cos(theta)
        t = lower + span * s * s
        if t <= 0.0:
            return 0.0
        return 2.0 * span * span * s * s * co * co * math.exp(log_kernel(t) - top)

    def to_theta(t: float) -> float:
        ratio = min(max((t - lower) / span, 0.0), 1.0)
        return math.asin(math.sqrt(ratio))

    relative_width = 1.0 / math.sqrt(power)
    knots = {to_theta(peak * (1.0 + f * relative_width)) for f in (-10.0, -3.0, 0.0, 3.0, 10.0)}
    knots = tuple(sorted(t for t in knots if 0.0 < t < math.pi / 2))
    spec = QuadratureSpec(lower=0.0, upper=math.pi / 2, breakpoints=knots)
    return top + math.log(integrate(integrand, spec))


@lru_cache(maxsize=65536)
def log_rho_gamma_rect(x: float, gamma: float, c: float) -> float:
    """log ρ_γ(x) при 0 < c < 1."""
    _require_positive(x, gamma)
    if not 0 < c < 1:
        raise DomainError(f"c должно лежать в (0, 1), получено {c}")
    k = x * (gamma + 1.0) / c
    return (
        gamma * math.log(x)
        - math.log(2.0 * math.pi)
        - log_gamma(gamma + 1.0)
        + (gamma + 1.0) * math.log((gamma + 1.0) / c)
        + _rect_log_integral(k, gamma, c, gamma + 2.0)
    )


def rho_gamma_rect(x: float, gamma: float, c: float) -> float:
    return math.exp(log_rho_gamma_rect(x, gamma, c))


@lru_cache(maxsize=256)
def rect_small_x_constant(gamma: float, c: float) -> float:
    """D_γ = lim ρ_γ(x)/x^γ при x → 0 для c < 1."""
    if not 0 < c < 1:
        raise DomainError(f"c должно лежать в (0, 1), получено {c}")
    log_value = (
        -math.log(2.0 * math.pi)
        - log_gamma(gamma + 1.0)
        + (gamma + 1.0) * math.log((gamma + 1.0) / c)
        + _rect_log_integral(0.0, gamma, c, gamma + 2.0)
    )
    return math.exp(log_value)


def small_x_prefactor(gamma: float) -> float:
    """lim ρ_γ(x)·√x при x → 0 для c = 1: √(γ+1)Γ(γ+1/2)/(πΓ(γ+1))."""
    if not gamma > 0:
        raise DomainError(f"γ должно быть > 0, получено {gamma}")
    return math.exp(0.5 * math.log(gamma + 1.0) + log_gamma(gamma + 0.5) - log_gamma(gamma + 1.0)) / math.pi


def large_x_rate(gamma: float, c: float) -> float:
    """Скорость экспоненциального убывания (γ+1)/(cX₊)."""
    return (gamma + 1.0) / (c * support_bounds(c).upper)


def _log_large_x(x: float, gamma: float, c: float) -> float:
    bounds = support_bounds(c)
    span = bounds.upper - bounds.lower
    return (
        0.5 * math.log(span)
        - math.log(4.0 * SQRT_PI)
        - log_gamma(gamma + 1.0)
        - (gamma - 1.0) * math.log(bounds.upper)
        + (gamma - 0.5) * math.log((gamma + 1.0) / c)
        + (gamma - 1.5) * math.log(x)
        - large_x_rate(gamma, c) * x
    )


def asymptotic_branch(x: float, model: DensityModel) -> BranchValue:
    """Асимптотика обобщенной плотности при малых (x < 1) или больших x."""
    if model.kind == DensityKind.MP:
        raise DomainError("Асимптотические ветви определены только для обобщенных плотностей")
    if not x > 0:
        raise DomainError(f"x должно быть > 0, получено {x}")
    gamma, c = model.gamma, model.c
    if x < 1.0:
        if model.kind == DensityKind.GEN_SQUARE:
            return BranchValue(small_x_prefactor(gamma) / math.sqrt(x), "small_x")
        return BranchValue(rect_small_x_constant(gamma, c) * x ** gamma, "small_x")
    return BranchValue(math.exp(_log_large_x(x, gamma, c)), "large_x")


def evaluate_density(model: DensityModel, x: float) -> float:
    """Значение плотности модели; вне носителя 0."""
    if model.kind == DensityKind.MP:
        return mp_density(x, model.c)
    if not x > 0:
        return 0.0
    if model.kind == DensityKind.GEN_SQUARE:
        log_value = log_rho_gamma_square_closed(float(x), model.gamma)
    else:
        log_value = log_rho_gamma_rect(float(x), model.gamma, model.c)
    return math.exp(log_value) if log_value > -745.0 else 0.0


def evaluate_density_array(model: DensityModel, xs) -> np.ndarray:
    return np.array([evaluate_density(model, float(x)) for x in np.atleast_1d(xs)])


def theta_map(y: float, model: DensityModel) -> float:
    """ϑ(y) = |y|·ρ(y²); в точке y = 0 значение 0."""
    if y == 0:
        return 0.0
    return abs(y) * evaluate_density(model, y * y)


def theta_gamma_zero(y: float) -> float:
    """Предел γ → 0: ϑ(y) = |y|·Γ(-1/2, y²/4)/(4√π) с каспом в нуле."""
    if y == 0:
        return 0.0
    w = y * y / 4.0
    if w < 1e-12:
        return 1.0 / SQRT_PI - abs(y) / 2.0
    return abs(y) * upper_incomplete_gamma(-0.5, w) / (4.0 * SQRT_PI)


def density_quadrature_spec(model: DensityModel, relative_tolerance: float = 1e-9) -> QuadratureSpec:
    """Квадратура по носителю с учетом особенностей на краях."""
    support = density_support(model)
    if model.kind == DensityKind.MP:
        lower_exponent = -0.5 if model.c == 1 else 0.5
        return QuadratureSpec(
            lower=support.lower,
            upper=support.upper,
            lower_exponent=lower_exponent,
            upper_exponent=0.5,
            relative_tolerance=relative_tolerance,
        )
    if model.kind == DensityKind.GEN_SQUARE:
        return QuadratureSpec(
            lower=0.0,
            upper=math.inf,
            lower_exponent=-0.5,
            breakpoints=(1.0, 4.0),
            relative_tolerance=relative_tolerance,
        )
    edges = support_bounds(model.c)
    return QuadratureSpec(
        lower=0.0,
        upper=math.inf,
        breakpoints=tuple(sorted({model.c * edges.lower, 1.0, model.c * edges.upper})),
        relative_tolerance=relative_tolerance,
    )


def density_moments(model: DensityModel) -> Tuple[float, float]:
    """Масса и первый момент плотности квадратурой."""
    spec = density_quadrature_spec(model)
    mass = integrate_detailed(lambda x: evaluate_density(model, x), spec).value
    mean = integrate_detailed(lambda x: x * evaluate_density(model, x), spec).value
    return mass, mean


def theta_moments(model: DensityModel) -> Tuple[float, float]:
    """Масса и второй момент ϑ на прямой (по симметрии 2∫_0^∞)."""
    support = density_support(model)
    edge = math.sqrt(support.upper)
    if math.isfinite(edge):
        inner = (math.sqrt(support.lower),) if support.lower > 0 else ()
        spec = QuadratureSpec(
            lower=0.0, upper=edge, upper_exponent=0.5, breakpoints=inner, relative_tolerance=1e-9
        )
    else:
        spec = QuadratureSpec(lower=0.0, upper=math.inf, breakpoints=(1.0, 2.0), relative_tolerance=1e-9)
    mass = 2.0 * integrate(lambda y: theta_map(y, model), spec)
    second = 2.0 * integrate(lambda y: y * y * theta_map(y, model), spec)
    return mass, second
