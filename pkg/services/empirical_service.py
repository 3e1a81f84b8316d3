"""
Сервис эмпирических спектров: загрузка доходностей, ковариационный спектр,
отсечение выбросов и подгонка γ по гистограмме собственных значений.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, TextIO, Tuple, Union

import numpy as np
import pandas as pd
from scipy import stats

from config.settings import get_settings
from ensembles.models import EnsembleConfig, Family
from harness.models import Histogram
from harness.statistics import build_histogram
from numerics.eigen import SymmetricMatrix, symmetric_eigenvalues
from numerics.rng import RandomStream
from services.experiment_service import ExperimentService
from theory.density import evaluate_density
from theory.models import DensityModel
from utils.exceptions import DataFormatError, DomainError
from utils.serialization import dumps_canonical

GOLDEN_RATIO = (math.sqrt(5.0) - 1.0) / 2.0
MIN_FIT_EIGENVALUES = 50
# Узлы Гаусса-Лежандра для среднего плотности по бину
BIN_QUADRATURE_NODES = 3


class FitFamily(str, Enum):
    """Семейство теоретической кривой при подгонке."""

    MP = "mp"
    INV_CHI2 = "invchi2"
    CHI2_MC = "chi2mc"


@dataclass(frozen=True)
class ReturnsMatrix:
    """Доходности: строки - моменты времени, столбцы - активы."""

    values: np.ndarray
    labels: Tuple[str, ...]

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape[1] != len(self.labels):
            raise DataFormatError("Число столбцов не совпадает с числом меток")
        if not np.all(np.isfinite(values)):
            raise DataFormatError("Матрица доходностей содержит нечисловые значения")
        object.__setattr__(self, "values", values)

    @property
    def t_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]

    @property
    def c(self) -> float:
        return self.n_cols / self.t_rows

    @property
    def underdetermined(self) -> bool:
        """Активов больше, чем наблюдений: режим c < 1 недоступен."""
        return self.n_cols > self.t_rows

    def to_csv(self, stream: TextIO) -> None:
        frame = pd.DataFrame(self.values, columns=list(self.labels))
        frame.to_csv(stream, index=False, float_format="%.17g", lineterminator="\n")


@dataclass(frozen=True)
class FitResult:
    """Результат подгонки: γ̂ (нет для MP), значение целевой функции и кривая наложения."""

    family: FitFamily
    gamma_hat: Optional[float]
    c: float
    objective: float
    trimmed: int
    fit_x: List[float]
    fit_y: List[float]
    histogram: Histogram
    search_trace: List[float] = field(default_factory=list)

    def to_payload(self) -> Dict[str, Any]:
        return {
            "family": self.family.value,
            "gamma_hat": self.gamma_hat,
            "c": self.c,
            "objective": self.objective,
            "trimmed": self.trimmed,
            "fit_x": self.fit_x,
            "fit_y": self.fit_y,
            "bin_edges": self.histogram.bin_edges,
            "density": self.histogram.density,
        }

    def to_json(self) -> str:
        return dumps_canonical(self.to_payload())


def _parse_cell(text: str) -> float:
    # float() округляет корректно, быстрый парсер pandas может ошибиться в последнем бите
    try:
        return float(text)
    except ValueError:
        return math.nan


def load_returns_csv(path: Union[str, Path]) -> ReturnsMatrix:
    """CSV с заголовком из меток активов; строки - время."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Файл не найден: {path}")
    try:
        raw = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError as e:
        raise DataFormatError(f"Пустой файл {path}") from e
    except pd.errors.ParserError as e:
        raise DataFormatError(f"Ошибка разбора {path}: {e}") from e

    if raw.empty:
        raise DataFormatError(f"В файле {path} нет строк данных (no data rows)")

    labels = tuple(str(label).strip() for label in raw.columns)
    numeric = raw.apply(lambda column: column.map(_parse_cell)).to_numpy(dtype=float)
    bad_rows, bad_cols = np.nonzero(~np.isfinite(numeric))
    if bad_rows.size:
        # Номер строки данных с единицы, без учета заголовка
        row, col = int(bad_rows[0]), int(bad_cols[0])
        raise DataFormatError(
            f"Нечисловое значение {raw.iat[row, col]!r}", row=row + 1, column=labels[col]
        )

    data = ReturnsMatrix(values=numeric, labels=labels)
    if data.underdetermined:
        logging.warning(f"⚠️ Активов ({data.n_cols}) больше, чем наблюдений ({data.t_rows})")
    logging.info(f"✅ Загружены доходности {path.name}: T={data.t_rows}, N={data.n_cols}")
    return data


def covariance_spectrum(data: ReturnsMatrix) -> np.ndarray:
    """Спектр C = XᵀX/T стандартизованных столбцов, перенормированный на среднее 1."""
    if data.n_cols < 2:
        raise DomainError("Нужно хотя бы два актива")
    if data.t_rows <= data.n_cols:
        raise DomainError(f"Нужно T > N, получено T={data.t_rows}, N={data.n_cols}")

    mean = data.values.mean(axis=0)
    std = data.values.std(axis=0)
    # постоянный столбец дает std порядка ошибки округления, а не ноль
    flat = (np.ptp(data.values, axis=0) == 0) | ~(std > 1e-12 * np.maximum(1.0, np.abs(mean)))
    if flat.any():
        raise DataFormatError("Столбец с нулевой дисперсией", column=data.labels[int(np.argmax(flat))])
    x = (data.values - mean) / std

    matrix = SymmetricMatrix.from_dense(x.T @ x / data.t_rows)
    if abs(matrix.trace() - data.n_cols) > 1e-9 * data.n_cols:
        raise DomainError(f"След стандартизованной корреляции {matrix.trace()!r} ≠ N = {data.n_cols}")

    eigenvalues = symmetric_eigenvalues(matrix)
    return eigenvalues / eigenvalues.mean()


def trim_top(eigenvalues, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """Убирает k наибольших значений и перенормирует оставшиеся на среднее 1."""
    values = np.sort(np.asarray(eigenvalues, dtype=float))
    if k < 0:
        raise DomainError("Число отсекаемых значений должно быть ≥ 0")
    if k >= values.size:
        raise DomainError(f"Нельзя отсечь {k} значений из {values.size}")
    kept, removed = values[: values.size - k], values[values.size - k:]
    return kept / kept.mean(), removed


class EmpiricalService:
    """Подгонка теоретических спектральных плотностей к эмпирическим спектрам."""

    def __init__(self, experiment_service: Optional[ExperimentService] = None, seed: int = 0):
        self.settings = get_settings()
        self.experiments = experiment_service or ExperimentService(show_progress=False)
        self.seed = seed

    # --- Целевые функции -----------------------------------------------------

    @staticmethod
    def _objective(histogram: Histogram, curve: np.ndarray) -> float:
        return float(np.mean((histogram.density - curve) ** 2))

    def _chi2_mc_density(self, histogram: Histogram, gamma: float, c: float) -> np.ndarray:
        """Оценка плотности χ²-ансамбля Монте-Карло на бинах гистограммы данных."""
        n = self.settings.chi2_mc_n
        m = max(n, round(n / c))
        config = EnsembleConfig(beta=1, n=n, m=m, gamma=gamma, family=Family.CHI2)
        # Один и тот же seed для всех γ: общие случайные числа сглаживают целевую функцию
        pooled = self.experiments.pooled_eigenvalues(config, self.settings.chi2_mc_samples, self.seed)
        counts, _ = np.histogram(pooled, histogram.bin_edges)
        return counts / (pooled.size * histogram.widths)

    def _curve(self, family: FitFamily, histogram: Histogram, c: float, gamma: Optional[float]) -> np.ndarray:
        """Среднее теоретической плотности по каждому бину, сравнимое с высотой столбца."""
        if family == FitFamily.CHI2_MC:
            return self._chi2_mc_density(histogram, gamma, c)
        model = DensityModel.mp(c) if family == FitFamily.MP else DensityModel.generalized(gamma, c)
        nodes, weights = np.polynomial.legendre.leggauss(BIN_QUADRATURE_NODES)
        left, right = histogram.bin_edges[:-1], histogram.bin_edges[1:]
        points = (left + right)[:, None] / 2.0 + (right - left)[:, None] / 2.0 * nodes[None, :]
        values = np.array([[evaluate_density(model, float(x)) for x in row] for row in points])
        return values @ weights / 2.0

    def fit_bin_count(self, size: int) -> int:
        """Число бинов растет как 2·n^(1/3), но не больше fit_bins и не меньше 10."""
        return int(min(self.settings.fit_bins, max(10, math.ceil(2.0 * size ** (1.0 / 3.0)))))

    # --- Поиск ---------------------------------------------------------------

    def _golden_search(self, objective: Callable[[float], float]) -> Tuple[float, float, List[float]]:
        """Грубая сетка по log γ, затем золотое сечение вокруг лучшего узла.

        Возвращает (log γ̂, значение, след лучших значений в скобке).
        """
        lower = math.log(self.settings.fit_gamma_min)
        upper = math.log(self.settings.fit_gamma_max)
        grid = np.linspace(lower, upper, self.settings.fit_coarse_points)
        values = [objective(float(u)) for u in grid]
        best = int(np.argmin(values))
        best_u, best_value = float(grid[best]), values[best]

        a = float(grid[max(best - 1, 0)])
        b = float(grid[min(best + 1, grid.size - 1)])
        x1, x2 = b - GOLDEN_RATIO * (b - a), a + GOLDEN_RATIO * (b - a)
        f1, f2 = objective(x1), objective(x2)
        trace = [min(f1, f2)]
        while b - a > self.settings.fit_golden_tolerance:
            if f1 <= f2:
                b, x2, f2 = x2, x1, f1
                x1 = b - GOLDEN_RATIO * (b - a)
                f1 = objective(x1)
            else:
                a, x1, f1 = x1, x2, f2
                x2 = a + GOLDEN_RATIO * (b - a)
                f2 = objective(x2)
            trace.append(min(f1, f2))

        for u, value in ((x1, f1), (x2, f2)):
            if value < best_value:
                best_u, best_value = u, value
        return best_u, best_value, trace

    def fit_gamma(self, eigenvalues, c: float, family: FitFamily, bins: Optional[int] = None, trimmed: int = 0) -> FitResult:
        """Подгонка γ по среднеквадратичному отклонению гистограммы от теоретической плотности."""
        family = FitFamily(family)
        if not 0 < c < 1:
            raise DomainError(f"c должно лежать в (0, 1), получено {c}")
        values = np.sort(np.asarray(eigenvalues, dtype=float))
        if values.size < MIN_FIT_EIGENVALUES:
            raise DomainError(f"Нужно не меньше {MIN_FIT_EIGENVALUES} собственных значений, получено {values.size}")
        values = values / values.mean()

        bins = bins or self.fit_bin_count(values.size)
        histogram = build_histogram(values, bins)
        if np.count_nonzero(histogram.counts) <= 1:
            raise DomainError("Вырожденная гистограмма: занят один бин")

        logging.info(f"🔄 Подгонка {family.value}: {values.size} значений, c={c:.4g}")
        if family == FitFamily.MP:
            curve = self._curve(family, histogram, c, None)
            gamma_hat, objective, trace = None, self._objective(histogram, curve), []
        else:
            def objective_of(log_gamma: float) -> float:
                return self._objective(histogram, self._curve(family, histogram, c, math.exp(log_gamma)))

            log_gamma, objective, trace = self._golden_search(objective_of)
            gamma_hat = math.exp(log_gamma)
            curve = self._curve(family, histogram, c, gamma_hat)

        logging.info(f"✅ Подгонка {family.value} завершена: γ̂={gamma_hat}, ошибка={objective:.6g}")
        return FitResult(
            family=family,
            gamma_hat=gamma_hat,
            c=c,
            objective=objective,
            trimmed=trimmed,
            fit_x=histogram.centers.tolist(),
            fit_y=curve.tolist(),
            histogram=histogram,
            search_trace=trace,
        )

    def fit_returns(self, data: ReturnsMatrix, family: FitFamily, trim: Optional[int] = None) -> FitResult:
        """Полный конвейер: спектр, отсечение trim наибольших значений, подгонка."""
        trim = self.settings.trim_default if trim is None else trim
        try:
            spectrum = covariance_spectrum(data)
            kept, removed = trim_top(spectrum, trim)
            if removed.size:
                logging.info(f"📊 Отсечены наибольшие значения: {np.round(removed, 4).tolist()}")
            return self.fit_gamma(kept, data.c, family, trimmed=trim)
        except (DataFormatError, DomainError) as e:
            logging.error(f"❌ Ошибка подгонки спектра: {e}")
            raise

    # --- Синтетические данные -----------------------------------------------

    def generate_synthetic_returns(
        self,
        n: int,
        t: int,
        family: Family,
        gamma: Optional[float] = None,
        beta: int = 1,
        reference_n: int = 50,
    ) -> ReturnsMatrix:
        """Доходности, спектр корреляций которых равен квантилям суперстатистического спектра.

        Квантили берутся из объединенных собственных значений ансамбля при том же c = n/t;
        матрица корреляций с этим спектром строится scipy.stats.random_correlation.
        """
        if not 2 <= n < t:
            raise DomainError(f"Нужно 2 ≤ n < t, получено n={n}, t={t}")
        reference_n = min(n, reference_n)
        config = EnsembleConfig(
            beta=beta,
            n=reference_n,
            m=max(reference_n, round(reference_n * t / n)),
            gamma=gamma,
            family=family,
        )
        samples = max(200, math.ceil(20 * n / reference_n))
        logging.info(f"🚀 Генерация синтетических доходностей: n={n}, t={t}, {config.to_payload()}")

        pooled = self.experiments.pooled_eigenvalues(config, samples, self.seed)
        eigs = np.quantile(pooled, (np.arange(n) + 0.5) / n)
        eigs *= n / eigs.sum()
        eigs[-1] += n - eigs.sum()

        stream = RandomStream(self.seed, samples)
        correlation = stats.random_correlation.rvs(eigs, random_state=stream.generator)
        factor = np.linalg.cholesky(correlation)

        # Ортонормированные столбцы, ортогональные вектору единиц: нулевое среднее и XᵀX/T = C
        basis = np.column_stack([np.ones(t), stream.generator.standard_normal((t, n))])
        q, _ = np.linalg.qr(basis)
        values = math.sqrt(t) * q[:, 1:] @ factor.T

        labels = tuple(f"A{index:04d}" for index in range(1, n + 1))
        logging.info(f"✅ Синтетические доходности готовы: T={t}, N={n}")
        return ReturnsMatrix(values=values, labels=labels)
