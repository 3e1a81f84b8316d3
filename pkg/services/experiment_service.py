"""
Сервис Монте-Карло экспериментов: выборка ансамблей, гистограммы и сравнение с теорией.
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from tqdm import tqdm

from config.settings import get_settings
from ensembles.models import EnsembleConfig, Family
from ensembles.samplers import SamplingMethod, rescale_by_grand_mean, rescale_to_unit_mean, sample_ensemble
from harness.models import ExperimentReport, MeanCheck
from harness.statistics import build_histogram, cdf_of, chi2_per_bin, ks_statistic, max_bin_deviation
from numerics.rng import RandomStream
from theory.density import evaluate_density
from theory.models import DensityModel, SpacingModel
from theory.spacing import evaluate_spacing, gen_model, individual_spacing, wd_model, wl2_model
from utils.exceptions import DomainError, SamplingError, SuperstatError

RescaleMode = Literal["ensemble", "sample"]

MIN_DENSITY_SAMPLES = 100
MIN_SPACING_SAMPLES = 10_000


@dataclass(frozen=True)
class SpectraBatch:
    """R спектров (R×N) и соответствующие смешивающие переменные."""

    xi: np.ndarray
    spectra: np.ndarray

    @property
    def R(self) -> int:
        return self.spectra.shape[0]


class ExperimentService:
    """Сервис для запуска экспериментов Монте-Карло."""

    def __init__(
        self,
        workers: Optional[int] = None,
        show_progress: Optional[bool] = None,
        method: SamplingMethod = "auto",
        rescale: RescaleMode = "ensemble",
    ):
        settings = get_settings()
        self.workers = workers or settings.workers
        self.show_progress = settings.show_progress if show_progress is None else show_progress
        self.method = method
        self.rescale = rescale

    # --- Выборка -------------------------------------------------------------

    def _sample_chunk(self, config: EnsembleConfig, seed: int, ids: range) -> Tuple[np.ndarray, np.ndarray]:
        xi = np.empty(len(ids))
        spectra = np.empty((len(ids), config.n))
        for row, stream_id in enumerate(ids):
            try:
                sample = sample_ensemble(RandomStream(seed, stream_id), config, self.method)
            except (SuperstatError, np.linalg.LinAlgError, ValueError, ArithmeticError) as e:
                raise SamplingError(stream_id, e) from e
            xi[row] = sample.xi
            spectra[row] = sample.eigenvalues
        return xi, spectra

    def sample_spectra(self, config: EnsembleConfig, R: int, seed: int) -> SpectraBatch:
        """R независимых выборок; поток выборки j имеет stream_id = j."""
        if R < 1:
            raise DomainError(f"Число выборок должно быть ≥ 1, получено {R}")
        chunk = max(1, min(1000, R // (self.workers * 8) or 1))
        chunks = [range(start, min(start + chunk, R)) for start in range(0, R, chunk)]

        xi_parts: List[np.ndarray] = []
        spectra_parts: List[np.ndarray] = []
        with tqdm(total=R, disable=not self.show_progress, desc="Выборки", unit="спектр") as progress:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                # map сохраняет порядок блоков: результат не зависит от числа потоков
                for xi, spectra in executor.map(lambda ids: self._sample_chunk(config, seed, ids), chunks):
                    xi_parts.append(xi)
                    spectra_parts.append(spectra)
                    progress.update(len(xi))
        return SpectraBatch(xi=np.concatenate(xi_parts), spectra=np.vstack(spectra_parts))

    def pooled_eigenvalues(self, config: EnsembleConfig, R: int, seed: int) -> np.ndarray:
        """Все N·R собственных значений, перенормированные выбранным способом."""
        return self._rescaled(self.sample_spectra(config, R, seed).spectra).ravel()

    def _rescaled(self, spectra: np.ndarray) -> np.ndarray:
        if self.rescale == "sample":
            return np.vstack([rescale_to_unit_mean(row) for row in spectra])
        return rescale_by_grand_mean(spectra)

    # --- Выбор теории --------------------------------------------------------

    @staticmethod
    def density_model_for(config: EnsembleConfig) -> Optional[DensityModel]:
        if config.family == Family.WL:
            return DensityModel.mp(config.c)
        if config.family == Family.INV_CHI2:
            return DensityModel.generalized(config.gamma, config.c)
        return None

    @staticmethod
    def spacing_models_for(config: EnsembleConfig) -> Tuple[Optional[SpacingModel], Dict[str, SpacingModel]]:
        """Основная модель расстояний и альтернативы для сравнения."""
        beta = config.beta
        if config.family == Family.WL:
            if config.n == 2:
                return wl2_model(beta, config.m), {"wd": wd_model(beta)}
            return wd_model(beta), {"wl2": wl2_model(beta, config.m - config.n + 2)}
        if config.family == Family.INV_CHI2:
            return gen_model(beta, config.gamma), {"wd": wd_model(beta)}
        return None, {"wd": wd_model(beta)}

    @staticmethod
    def mean_eigenvalue_check(spectra: np.ndarray, config: EnsembleConfig) -> MeanCheck:
        """Общее среднее неперенормированных собственных значений против теории (3σ)."""
        per_sample = spectra.mean(axis=1)
        observed = float(per_sample.mean())
        sigma = float(per_sample.std(ddof=1) / math.sqrt(per_sample.size)) if per_sample.size > 1 else math.inf
        expected = config.theoretical_mean_eigenvalue()
        return MeanCheck(observed=observed, expected=expected, sigma=sigma, passed=abs(observed - expected) <= 3.0 * sigma)

    # --- Эксперименты --------------------------------------------------------

    def _compare(self, values: np.ndarray, histogram, model, pdf) -> Tuple[Optional[float], Optional[float], Optional[float], List[float]]:
        if model is None:
            return None, None, None, []
        cdf = cdf_of(model)
        theory_y = [pdf(float(x)) for x in histogram.centers]
        ks = ks_statistic(values, cdf)
        try:
            deviation = max_bin_deviation(histogram, pdf)
            chi2 = chi2_per_bin(histogram, cdf)
        except DomainError as e:
            logging.warning(f"⚠️ Метрики по бинам недоступны: {e}")
            deviation, chi2 = None, None
        return ks, chi2, deviation, theory_y

    def run_density_experiment(self, config: EnsembleConfig, R: int, bins: Optional[int] = None, seed: int = 0) -> ExperimentReport:
        """Спектральная плотность: R спектров, гистограмма всех N·R значений и сравнение с теорией."""
        if R < MIN_DENSITY_SAMPLES:
            raise DomainError(f"Для эксперимента плотности нужно R ≥ {MIN_DENSITY_SAMPLES}")
        started = time.perf_counter()
        logging.info(f"🚀 Эксперимент плотности: {config.to_payload()}, R={R}, seed={seed}")
        try:
            batch = self.sample_spectra(config, R, seed)
            values = self._rescaled(batch.spectra).ravel()
            histogram = build_histogram(values, bins)

            model = self.density_model_for(config)
            ks, chi2, deviation, theory_y = self._compare(
                values, histogram, model, lambda x: evaluate_density(model, x)
            )
            alternatives: Dict[str, float] = {}
            if config.family == Family.CHI2:
                alternatives["mp"] = ks_statistic(values, cdf_of(DensityModel.mp(config.c)))

            mean_check = self.mean_eigenvalue_check(batch.spectra, config)
            if not mean_check.passed:
                logging.warning(
                    f"⚠️ Среднее собственное значение {mean_check.observed:.6g} "
                    f"отличается от {mean_check.expected:.6g} более чем на 3σ"
                )
        except SuperstatError as e:
            logging.error(f"❌ Ошибка эксперимента плотности: {e}")
            raise

        report = ExperimentReport(
            kind="density",
            config=config,
            seed=seed,
            R=R,
            histogram=histogram,
            theory_label=model.label() if model else None,
            theory_x=histogram.centers.tolist() if model else [],
            theory_y=theory_y,
            ks=ks,
            chi2_per_bin=chi2,
            max_deviation=deviation,
            runtime_seconds=time.perf_counter() - started,
            rescale=self.rescale,
            method=self.method,
            mean_check=mean_check,
            ks_alternatives=alternatives,
        )
        logging.info(f"✅ Эксперимент плотности завершен: KS={ks}, отклонение={deviation}")
        return report

    def run_spacing_experiment(
        self, config: EnsembleConfig, k: int, R: int, bins: Optional[int] = None, seed: int = 0
    ) -> ExperimentReport:
        """Индивидуальное расстояние s_k по R спектрам и сравнение с законами расстояний."""
        if not 2 <= k <= config.n:
            raise DomainError(f"k должно лежать в [2, {config.n}], получено {k}")
        if R < MIN_SPACING_SAMPLES:
            raise DomainError(f"Для эксперимента расстояний нужно R ≥ {MIN_SPACING_SAMPLES}")
        started = time.perf_counter()
        logging.info(f"🚀 Эксперимент расстояний: {config.to_payload()}, k={k}, R={R}, seed={seed}")
        try:
            batch = self.sample_spectra(config, R, seed)
            values = individual_spacing(batch.spectra, k)
            histogram = build_histogram(values, bins)

            model, alternatives_models = self.spacing_models_for(config)
            ks, chi2, deviation, theory_y = self._compare(
                values, histogram, model, lambda s: evaluate_spacing(model, s)
            )
            alternatives = {
                name: ks_statistic(values, cdf_of(alternative))
                for name, alternative in alternatives_models.items()
            }
        except SuperstatError as e:
            logging.error(f"❌ Ошибка эксперимента расстояний: {e}")
            raise

        report = ExperimentReport(
            kind="spacing",
            config=config,
            seed=seed,
            R=R,
            histogram=histogram,
            theory_label=model.label() if model else None,
            theory_x=histogram.centers.tolist() if model else [],
            theory_y=theory_y,
            ks=ks,
            chi2_per_bin=chi2,
            max_deviation=deviation,
            runtime_seconds=time.perf_counter() - started,
            rescale="spacing_mean",
            method=self.method,
            k=k,
            ks_alternatives=alternatives,
        )
        logging.info(f"✅ Эксперимент расстояний завершен: KS={ks}, альтернативы={alternatives}")
        return report
