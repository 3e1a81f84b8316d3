"""
Сэмплеры матриц: плотный Уишарт-Лагерр, трехдиагональная β-модель
и суперстатистические обертки над ними.
"""

import math
from typing import Literal, Optional

import numpy as np

from ensembles.models import EnsembleConfig, Family, SpectralSample
from numerics import rng
from numerics.eigen import SymmetricMatrix, TridiagonalMatrix, symmetric_eigenvalues, tridiagonal_eigenvalues
from numerics.specfun import log_bessel_k
from utils.exceptions import DomainError

SamplingMethod = Literal["auto", "dense", "tridiagonal"]


def sample_wl_dense(stream: rng.RandomStream, beta: int, n: int, m: int, eta: float) -> SpectralSample:
    """Спектр X†X для гауссовой X размера m×n с дисперсией компонент 1/(2βη)."""
    if beta not in (1, 2):
        raise DomainError("Плотный сэмплер поддерживает β ∈ {1, 2}; для β = 4 используйте трехдиагональную модель")
    if not eta > 0:
        raise DomainError(f"η должно быть > 0, получено {eta}")
    if n < 1 or m < n:
        raise DomainError(f"Требуется 1 ≤ N ≤ M, получено N = {n}, M = {m}")

    sd = math.sqrt(1.0 / (2.0 * beta * eta))
    if beta == 1:
        x = rng.gaussian(stream, 0.0, sd, size=(m, n))
        eigenvalues = symmetric_eigenvalues(SymmetricMatrix.from_dense(x.T @ x))
    else:
        # Комплексная X = A + iB через вещественное представление [[A, -B], [B, A]]
        a = rng.gaussian(stream, 0.0, sd, size=(m, n))
        b = rng.gaussian(stream, 0.0, sd, size=(m, n))
        blown_up = np.block([[a, -b], [b, a]])
        doubled = symmetric_eigenvalues(SymmetricMatrix.from_dense(blown_up.T @ blown_up))
        eigenvalues = doubled.reshape(n, 2).mean(axis=1)
    return SpectralSample(xi=1.0, eigenvalues=np.sort(eigenvalues))


def sample_laguerre_tridiag(stream: rng.RandomStream, beta: float, n: int, m: int) -> TridiagonalMatrix:
    """T = B·Bᵀ для нижней двухдиагональной B с χ-элементами; вес спектра e^{-λ/2}."""
    if not beta > 0:
        raise DomainError(f"β должно быть > 0, получено {beta}")
    if n < 1 or m < n:
        raise DomainError(f"Требуется 1 ≤ N ≤ M, получено N = {n}, M = {m}")

    diag_dof = beta * (m - np.arange(n))
    diag = np.array([rng.chi_variate(stream, dof) for dof in diag_dof])
    if n == 1:
        return TridiagonalMatrix(diag ** 2, np.empty(0))
    sub_dof = beta * (n - 1 - np.arange(n - 1))
    sub = np.array([rng.chi_variate(stream, dof) for dof in sub_dof])

    t_diag = diag ** 2
    t_diag[1:] += sub ** 2
    t_off = diag[:-1] * sub
    return TridiagonalMatrix(t_diag, t_off)


def _tridiagonal_spectrum(stream: rng.RandomStream, beta: int, n: int, m: int, eta: float) -> np.ndarray:
    t = sample_laguerre_tridiag(stream, beta, n, m)
    return tridiagonal_eigenvalues(t) / (2.0 * eta * beta)


def _resolve_method(beta: int, method: SamplingMethod) -> str:
    if method == "auto":
        return "dense" if beta in (1, 2) else "tridiagonal"
    if method == "dense" and beta == 4:
        raise DomainError("Для β = 4 доступна только трехдиагональная модель")
    return method


def draw_mixing(stream: rng.RandomStream, config: EnsembleConfig) -> tuple[float, float]:
    """Возвращает (ξ, η) для семейства конфигурации."""
    if config.family == Family.INV_CHI2:
        xi = float(rng.xi_inverse_chi2(stream, config.gamma))
        return xi, config.gamma * xi
    if config.family == Family.CHI2:
        xi = float(rng.xi_chi2(stream, config.gamma, config.beta, config.n, config.m))
        return xi, xi / config.gamma
    raise DomainError("Семейство WL не имеет смешивающей переменной")


def sample_superstat(
    stream: rng.RandomStream,
    config: EnsembleConfig,
    method: SamplingMethod = "auto",
) -> SpectralSample:
    """Суперстатистическая выборка: сначала ξ, затем WL-спектр при η(ξ)."""
    if config.family == Family.WL:
        raise DomainError("Для семейства WL используйте sample_wl_dense")
    xi, eta = draw_mixing(stream, config)
    if _resolve_method(config.beta, method) == "dense":
        spectrum = sample_wl_dense(stream, config.beta, config.n, config.m, eta).eigenvalues
    else:
        spectrum = np.sort(_tridiagonal_spectrum(stream, config.beta, config.n, config.m, eta))
    return SpectralSample(xi=xi, eigenvalues=spectrum)


def sample_ensemble(
    stream: rng.RandomStream,
    config: EnsembleConfig,
    method: SamplingMethod = "auto",
) -> SpectralSample:
    """Выборка для любого семейства конфигурации."""
    if config.is_superstatistical:
        return sample_superstat(stream, config, method)
    if _resolve_method(config.beta, method) == "dense":
        return sample_wl_dense(stream, config.beta, config.n, config.m, config.eta)
    spectrum = _tridiagonal_spectrum(stream, config.beta, config.n, config.m, config.eta)
    return SpectralSample(xi=1.0, eigenvalues=np.sort(spectrum))


def rescale_to_unit_mean(eigenvalues) -> np.ndarray:
    """λ_j = N·μ_j / Σμ: среднее результата равно 1, порядок сохраняется."""
    values = np.asarray(eigenvalues, dtype=float)
    if values.size == 0 or np.any(values <= 0):
        raise DomainError("Для перенормировки нужны положительные собственные значения")
    total = values.sum()
    if not total > 0:
        raise DomainError("Сумма собственных значений равна нулю")
    return values * (values.size / total)


def rescale_by_grand_mean(spectra: np.ndarray) -> np.ndarray:
    """Делит все спектры (R×N) на общее среднее по ансамблю."""
    spectra = np.asarray(spectra, dtype=float)
    grand_mean = spectra.mean()
    if not grand_mean > 0:
        raise DomainError("Среднее собственное значение по ансамблю должно быть > 0")
    return spectra / grand_mean


def bare_spacings(eigenvalues) -> np.ndarray:
    """Разности соседних собственных значений s̃_j = μ_j - μ_{j-1}."""
    values = np.asarray(eigenvalues, dtype=float)
    if values.size < 2:
        raise DomainError("Нужно хотя бы два собственных значения")
    spacings = np.diff(values)
    if np.any(spacings < 0):
        raise DomainError("Собственные значения не упорядочены по возрастанию")
    return spacings


def matrix_element_log_weight(trace_w: float, config: EnsembleConfig) -> float:
    """Логарифм веса матрицы X после интегрирования по ξ (с точностью до константы).

    INV_CHI2 дает вес через K_ν, CHI2 - степенное убывание.
    """
    if not trace_w > 0:
        raise DomainError("Tr W должен быть > 0")
    beta, gamma = config.beta, config.gamma
    half_dim = beta * config.n * config.m / 2.0
    if config.family == Family.INV_CHI2:
        a = beta * gamma * trace_w
        nu = half_dim - gamma - 1.0
        return -0.5 * nu * math.log(a) + log_bessel_k(nu, 2.0 * math.sqrt(a))
    if config.family == Family.CHI2:
        return -(gamma + half_dim) * math.log1p(beta * trace_w / gamma)
    return -beta * config.eta * trace_w
