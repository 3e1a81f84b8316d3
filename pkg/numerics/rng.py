"""
Детерминированные потоки случайных чисел и скалярные сэмплеры смешивающих распределений.

Поток задается парой (master_seed, stream_id) и использует счетчиковый
генератор Philox: последовательность не зависит от порядка и числа потоков.
"""

import math
from typing import Optional, Union

import numpy as np
from scipy import special

from utils.exceptions import DomainError

UINT64_MASK = (1 << 64) - 1

ArrayOrFloat = Union[float, np.ndarray]


class RandomStream:
    """Независимый поток случайных чисел для одной выборки Монте-Карло."""

    def __init__(self, master_seed: int = 0, stream_id: int = 0):
        if not (0 <= master_seed <= UINT64_MASK and 0 <= stream_id <= UINT64_MASK):
            raise DomainError("master_seed и stream_id должны быть 64-битными беззнаковыми числами")
        self.master_seed = int(master_seed)
        self.stream_id = int(stream_id)
        key = (self.master_seed << 64) | self.stream_id
        self.generator = np.random.Generator(np.random.Philox(key=key))

    def spawn(self, stream_id: int) -> "RandomStream":
        """Поток с тем же master_seed и другим stream_id."""
        return RandomStream(self.master_seed, stream_id)

    def __repr__(self) -> str:
        return f"RandomStream(master_seed={self.master_seed}, stream_id={self.stream_id})"


def _positive(name: str, value: float) -> None:
    if not value > 0:
        raise DomainError(f"{name} должен быть > 0, получено {value}")


def gaussian(stream: RandomStream, mean: float, sd: float, size: Optional[int] = None) -> ArrayOrFloat:
    """N(mean, sd²)."""
    _positive("sd", sd)
    return stream.generator.normal(mean, sd, size)


def gamma_variate(stream: RandomStream, shape: float, scale: float = 1.0, size: Optional[int] = None) -> ArrayOrFloat:
    """Gamma(shape, scale) с плотностью ∝ u^{shape-1} e^{-u/scale}."""
    _positive("shape", shape)
    _positive("scale", scale)
    return stream.generator.gamma(shape, scale, size)


def chi_variate(stream: RandomStream, dof: float, size: Optional[int] = None) -> ArrayOrFloat:
    """χ_dof = √(2·Gamma(dof/2, 1)); dof может быть нецелым."""
    _positive("dof", dof)
    return np.sqrt(2.0 * gamma_variate(stream, dof / 2.0, 1.0, size))


def xi_inverse_chi2(stream: RandomStream, gamma: float, size: Optional[int] = None) -> ArrayOrFloat:
    """ξ = 1/G, G ~ Gamma(γ+1, 1): плотность ξ^{-γ-2} e^{-1/ξ} / Γ(γ+1)."""
    _positive("gamma", gamma)
    return 1.0 / gamma_variate(stream, gamma + 1.0, 1.0, size)


def _check_shape(n: int, m: int) -> None:
    if n < 2 or m < n:
        raise DomainError(f"Требуется 2 ≤ N ≤ M, получено N = {n}, M = {m}")


def xi_chi2(stream: RandomStream, gamma: float, beta: int, n: int, m: int, size: Optional[int] = None) -> ArrayOrFloat:
    """ξ ~ Gamma(γ + βNM/2, 1) для χ²-семейства."""
    _positive("gamma", gamma)
    _check_shape(n, m)
    return gamma_variate(stream, gamma + beta * n * m / 2.0, 1.0, size)


def inverse_chi2_density(xi: ArrayOrFloat, gamma: float) -> ArrayOrFloat:
    """Плотность ξ^{-γ-2} e^{-1/ξ} / Γ(γ+1) при ξ > 0."""
    _positive("gamma", gamma)
    xi = np.asarray(xi, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        log_pdf = -(gamma + 2.0) * np.log(xi) - 1.0 / xi - special.gammaln(gamma + 1.0)
    result = np.where(xi > 0, np.exp(log_pdf), 0.0)
    return float(result) if result.ndim == 0 else result


def inverse_chi2_cdf(xi: ArrayOrFloat, gamma: float) -> ArrayOrFloat:
    """P(ξ ≤ x) = P(G ≥ 1/x) = Q(γ+1, 1/x)."""
    _positive("gamma", gamma)
    xi = np.asarray(xi, dtype=float)
    with np.errstate(divide="ignore"):
        result = np.where(xi > 0, special.gammaincc(gamma + 1.0, 1.0 / np.where(xi > 0, xi, 1.0)), 0.0)
    return float(result) if result.ndim == 0 else result


def chi2_mixing_mean(gamma: float, beta: int, n: int, m: int) -> float:
    """Среднее ξ для χ²-семейства."""
    return gamma + beta * n * m / 2.0


def log_chi2_mixing_density(xi: float, gamma: float, beta: int, n: int, m: int) -> float:
    """Логарифм плотности Gamma(γ + βNM/2, 1) в точке ξ."""
    shape = chi2_mixing_mean(gamma, beta, n, m)
    if not xi > 0:
        return -math.inf
    return (shape - 1.0) * math.log(xi) - xi - math.lgamma(shape)
