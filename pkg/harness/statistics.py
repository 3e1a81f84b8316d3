"""
Сравнение выборок с теорией: гистограммы, статистика Колмогорова-Смирнова,
табулированные функции распределения аналитических моделей.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy import interpolate, stats

from config.settings import get_settings
from harness.models import Histogram
from theory.density import density_support, evaluate_density
from theory.models import DensityModel, SpacingModel
from theory.spacing import evaluate_spacing
from utils.exceptions import DomainError

Model = Union[DensityModel, SpacingModel]

# Узлы Гаусса-Лежандра на отрезок сетки
GAUSS_NODES, GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(5)
# Значения x, которые всегда попадают в узлы таблицы
NICE_POINTS = (0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0)


def build_histogram(values, bins: Optional[int] = None, upper: Optional[float] = None) -> Histogram:
    """Гистограмма на [0, upper]; по умолчанию upper - 99.5-й перцентиль."""
    settings = get_settings()
    bins = bins or settings.histogram_bins
    values = np.asarray(values, dtype=float).ravel()
    if values.size == 0:
        raise DomainError("Пустая выборка для гистограммы")
    if upper is None:
        upper = float(np.percentile(values, settings.histogram_upper_quantile))
    if not upper > 0:
        raise DomainError("Верхняя граница гистограммы должна быть > 0")
    edges = np.linspace(0.0, upper, bins + 1)
    counts, _ = np.histogram(values, edges)
    n_values = int(counts.sum())
    overflow = int(values.size - n_values)
    density = counts / (values.size * np.diff(edges))
    return Histogram(bin_edges=edges, counts=counts.astype(np.int64), density=density, n_values=n_values, overflow=overflow)


def _vectorized(cdf: Callable) -> Callable[[np.ndarray], np.ndarray]:
    def call(x: np.ndarray) -> np.ndarray:
        try:
            result = np.asarray(cdf(x), dtype=float)
            if result.shape == np.shape(x):
                return result
        except (TypeError, ValueError):
            pass
        return np.array([float(cdf(float(v))) for v in np.ravel(x)]).reshape(np.shape(x))

    return call


def ks_statistic(values, cdf: Callable, monotonicity_samples: int = 200) -> float:
    """sup |F_n - F| по отсортированным значениям (scipy.stats.kstest)."""
    values = np.asarray(values, dtype=float).ravel()
    if values.size < 2:
        raise DomainError("Для статистики КС нужно хотя бы два значения")
    call = _vectorized(cdf)

    probe = np.linspace(values.min(), values.max(), monotonicity_samples)
    probe_values = call(probe)
    if np.any(np.diff(probe_values) < -1e-9):
        raise DomainError("Функция распределения немонотонна на диапазоне выборки")

    return float(stats.kstest(values, call).statistic)


def ks_two_sample(first, second) -> float:
    """Двухвыборочная статистика КС."""
    return float(stats.ks_2samp(np.ravel(first), np.ravel(second)).statistic)


@dataclass(frozen=True)
class TabulatedCDF:
    """Функция распределения, табулированная в переменной, сглаживающей края носителя.

    transform = "theta": x = L + Δ sin²θ (компактный носитель);
    transform = "sqrt": x = u² (полуось).
    """

    lower: float
    upper: float
    transform: str
    nodes: np.ndarray
    values: np.ndarray
    spline: Callable[[np.ndarray], np.ndarray]

    @property
    def mass(self) -> float:
        return float(self.values[-1])

    def _to_variable(self, x: np.ndarray) -> np.ndarray:
        if self.transform == "theta":
            ratio = np.clip((x - self.lower) / (self.upper - self.lower), 0.0, 1.0)
            return np.arcsin(np.sqrt(ratio))
        return np.sqrt(np.clip(x, 0.0, self.upper))

    def __call__(self, x):
        scalar = np.ndim(x) == 0
        x = np.asarray(x, dtype=float)
        result = np.clip(self.spline(self._to_variable(x)), 0.0, self.mass)
        result = np.where(x <= self.lower, 0.0, result)
        result = np.where(x >= self.upper, self.mass, result)
        return float(result) if scalar else result


def _model_pdf(model: Model) -> Callable[[float], float]:
    if isinstance(model, DensityModel):
        return lambda x: evaluate_density(model, x)
    return lambda s: evaluate_spacing(model, s)


def _tail_end(pdf: Callable[[float], float], start: float = 4.0, threshold: float = 1e-16) -> float:
    x = start
    while x < 1e4 and pdf(x) * x > threshold:
        x *= 1.5
    return x


def cdf_of(model: Model, grid_points: Optional[int] = None) -> TabulatedCDF:
    """Табулированная F модели: составная квадратура Гаусса-Лежандра и эрмитов сплайн."""
    grid_points = grid_points or get_settings().cdf_grid_points
    pdf = _model_pdf(model)

    support = density_support(model) if isinstance(model, DensityModel) else None
    if support is not None and support.bounded:
        lower, upper, transform = support.lower, support.upper, "theta"
        span = upper - lower
        end = math.pi / 2

        def to_x(t: float) -> float:
            return lower + span * math.sin(t) ** 2

        def jacobian(t: float) -> float:
            return span * math.sin(2.0 * t)

        extra = [math.asin(math.sqrt((x - lower) / span)) for x in NICE_POINTS if lower < x < upper]
    else:
        lower, transform = 0.0, "sqrt"
        upper = _tail_end(pdf)
        end = math.sqrt(upper)

        def to_x(t: float) -> float:
            return t * t

        def jacobian(t: float) -> float:
            return 2.0 * t

        extra = [math.sqrt(x) for x in NICE_POINTS if x < upper]

    nodes = np.unique(np.concatenate([np.linspace(0.0, end, grid_points + 1), extra]))

    def integrand(t: float) -> float:
        value = pdf(to_x(t)) * jacobian(t)
        return value if math.isfinite(value) else 0.0

    cumulative = np.zeros(nodes.size)
    for index in range(nodes.size - 1):
        a, b = nodes[index], nodes[index + 1]
        half = 0.5 * (b - a)
        points = 0.5 * (a + b) + half * GAUSS_NODES
        cumulative[index + 1] = cumulative[index] + half * sum(
            w * integrand(t) for w, t in zip(GAUSS_WEIGHTS, points)
        )

    # Производные на концах берутся чуть внутри, где подстановка уже сгладила особенность
    offset = 1e-6 * (nodes[1] - nodes[0])
    probes = nodes.copy()
    probes[0] += offset
    probes[-1] -= offset
    slopes = np.array([integrand(t) for t in probes])
    if np.all(np.isfinite(slopes)):
        spline = interpolate.CubicHermiteSpline(nodes, cumulative, slopes, extrapolate=True)
    else:
        spline = interpolate.PchipInterpolator(nodes, cumulative, extrapolate=True)

    logging.debug(f"📊 CDF модели {model.label()}: масса {cumulative[-1]:.10f}, узлов {nodes.size}")
    return TabulatedCDF(lower=lower, upper=upper, transform=transform, nodes=nodes, values=cumulative, spline=spline)


def ks_between_cdfs(first: Callable, second: Callable, grid: Sequence[float]) -> float:
    """sup |F₁ - F₂| на сетке."""
    grid = np.asarray(grid, dtype=float)
    return float(np.max(np.abs(_vectorized(first)(grid) - _vectorized(second)(grid))))


def max_bin_deviation(histogram: Histogram, pdf: Callable[[float], float], min_count: Optional[int] = None) -> float:
    """max |плотность гистограммы - теория в центре| по бинам с ≥ min_count значений."""
    min_count = min_count or get_settings().min_bin_count
    mask = histogram.counts >= min_count
    if not np.any(mask):
        raise DomainError(f"Нет бинов с числом значений ≥ {min_count}")
    theory = np.array([pdf(float(x)) for x in histogram.centers[mask]])
    return float(np.max(np.abs(histogram.density[mask] - theory)))


def chi2_per_bin(histogram: Histogram, cdf: Callable, min_count: Optional[int] = None) -> float:
    """Σ (наблюдаемое - ожидаемое)²/ожидаемое на бин по бинам с ≥ min_count значений."""
    min_count = min_count or get_settings().min_bin_count
    probabilities = np.diff(_vectorized(cdf)(histogram.bin_edges))
    expected = histogram.total * probabilities
    mask = (histogram.counts >= min_count) & (expected > 0)
    if not np.any(mask):
        raise DomainError(f"Нет бинов с числом значений ≥ {min_count}")
    residual = (histogram.counts[mask] - expected[mask]) ** 2 / expected[mask]
    return float(residual.sum() / mask.sum())
