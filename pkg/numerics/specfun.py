"""
Специальные функции: Γ, неполная Γ, K_ν Макдональда и Ψ Трикоми.

K_ν и Ψ считаются квадратурой интегральных представлений в логарифмической
шкале, чтобы выдерживать индексы порядка сотен и аргументы до 1e8.
"""

import math
from functools import lru_cache

import numpy as np
from scipy import optimize, special

from numerics.quadrature import log_integrate_peaked
from utils.exceptions import DomainError, GammaOverflowError, PoleError, ValueOverflowError

# Наибольший аргумент, при котором Γ(x) еще представима в double
GAMMA_OVERFLOW_X = 171.6243769563027
# Ниже этого x неполная Γ с отрицательным параметром не вычисляется
INCOMPLETE_GAMMA_MIN_X = 1e-12


def _is_pole(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def log_gamma(x: float) -> float:
    """log|Γ(x)|."""
    if _is_pole(x):
        raise PoleError(x)
    return float(special.gammaln(x))


def gamma_fn(x: float) -> float:
    """Γ(x) с контролем полюсов и переполнения."""
    if _is_pole(x):
        raise PoleError(x)
    if x > GAMMA_OVERFLOW_X:
        raise GammaOverflowError(x)
    value = float(special.gamma(x))
    if not math.isfinite(value):
        raise GammaOverflowError(x)
    return value


def upper_incomplete_gamma(a: float, x: float) -> float:
    """Γ(a, x) = ∫_x^∞ t^{a-1} e^{-t} dt для любого вещественного a и x > 0."""
    if not x > 0:
        raise DomainError(f"Γ(a, x) определена при x > 0, получено x = {x}")
    if x < INCOMPLETE_GAMMA_MIN_X:
        raise DomainError(f"x = {x} слишком мало для Γ(a, x)")
    if a > 0:
        tail = float(special.gammaincc(a, x))
        if tail == 0.0:
            return 0.0
        return math.exp(float(special.gammaln(a)) + math.log(tail))

    # Спуск по рекуррентности Γ(b-1, x) = (Γ(b, x) - x^{b-1} e^{-x}) / (b - 1)
    steps = int(math.ceil(-a))
    b = a + steps
    value = float(special.exp1(x)) if b == 0 else upper_incomplete_gamma(b, x)
    for _ in range(steps):
        value = (value - x ** (b - 1.0) * math.exp(-x)) / (b - 1.0)
        b -= 1.0
    return value


@lru_cache(maxsize=4096)
def log_bessel_k(nu: float, x: float) -> float:
    """log K_ν(x) по представлению K_ν(x) = x^ν/2^{ν+1} ∫ t^{-ν-1} exp(-t - x²/(4t)) dt."""
    if not x > 0:
        raise DomainError(f"K_ν(x) определена при x > 0, получено x = {x}")
    nu = abs(float(nu))
    x = float(x)
    # t = t0·e^u, t0 - точка максимума подынтегральной функции в переменной u
    t0 = x * x / (2.0 * (nu + math.hypot(nu, x)))
    q = x * x / (4.0 * t0)
    log_t0 = math.log(t0)

    def log_integrand(u: float) -> float:
        if u > 700.0 or u < -700.0:
            return -math.inf
        return -nu * (log_t0 + u) - t0 * math.exp(u) - q * math.exp(-u)

    width = 1.0 / math.sqrt(t0 + q)
    log_integral = log_integrate_peaked(log_integrand, 0.0, width)
    return nu * math.log(x) - (nu + 1.0) * math.log(2.0) + log_integral


def bessel_k(nu: float, x: float) -> float:
    """K_ν(x) с относительной точностью около 1e-10."""
    log_value = log_bessel_k(nu, x)
    if log_value > 709.0:
        raise ValueOverflowError("K_ν", log_value)
    return math.exp(log_value)


def _log1pexp(u: float) -> float:
    return float(np.logaddexp(0.0, u))


@lru_cache(maxsize=4096)
def log_tricomi_u(a: float, b: float, z: float) -> float:
    """log Ψ(a, b; z) по представлению Γ(a)^{-1} ∫ e^{-zt} t^{a-1} (1+t)^{b-a-1} dt."""
    if not a > 0:
        raise DomainError(f"Ψ(a, b; z) требует a > 0, получено a = {a}")
    if not z > 0:
        raise DomainError(f"Ψ(a, b; z) требует z > 0, получено z = {z}")
    a, b, z = float(a), float(b), float(z)
    k = b - a - 1.0

    # t = e^u; показатель ψ(u) имеет единственный максимум
    def log_integrand(u: float) -> float:
        if u > 700.0:
            return -math.inf
        return -z * math.exp(u) + a * u + k * _log1pexp(u)

    def slope(u: float) -> float:
        return -z * math.exp(u) + a + k * special.expit(u)

    lower = math.log(a / (2.0 * (z + abs(k)))) - 1.0
    upper = math.log((a + max(k, 0.0) + 1.0) / z) + 1.0
    peak = optimize.brentq(slope, lower, upper, xtol=1e-14, rtol=1e-14, maxiter=200)
    sigma = special.expit(peak)
    curvature = z * math.exp(peak) - k * sigma * (1.0 - sigma)
    width = 1.0 / math.sqrt(curvature) if curvature > 0 else 1.0

    return log_integrate_peaked(log_integrand, peak, width) - float(special.gammaln(a))


def tricomi_u(a: float, b: float, z: float) -> float:
    """Ψ(a, b; z) с относительной точностью около 1e-10."""
    log_value = log_tricomi_u(a, b, z)
    if log_value > 709.0:
        raise ValueOverflowError("Ψ", log_value)
    return math.exp(log_value)
