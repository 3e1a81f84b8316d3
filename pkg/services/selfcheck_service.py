"""
Набор самопроверок: рекуррентные соотношения спецфункций, нормировки
плотностей и законов расстояний, согласие сэмплеров с теорией.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Tuple

import numpy as np

from config.settings import DYSON_INDICES
from ensembles.models import EnsembleConfig, Family
from harness.statistics import cdf_of, ks_statistic, ks_two_sample
from numerics.specfun import gamma_fn, log_bessel_k, log_tricomi_u, upper_incomplete_gamma
from services.experiment_service import ExperimentService
from theory.density import density_moments, rho_gamma_square_closed, rho_gamma_square_integral
from theory.models import DensityModel
from theory.spacing import mean_spacing, mean_spacing_quadrature, spacing_moments, wd_model
from utils.exceptions import SuperstatError

SELFCHECK_SEED = 20240601


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _max_relative(pairs: Iterable[Tuple[float, float]]) -> float:
    return max(abs(a - b) / abs(b) for a, b in pairs)


class SelfCheckService:
    """Запускает самопроверки; quick уменьшает сетки параметров и число выборок."""

    def __init__(self, quick: bool = False):
        self.quick = quick
        self.gammas = (2.0,) if quick else (0.5, 2.0, 10.0)
        self.samples = 500 if quick else 2000
        self.ks_limit = 0.05 if quick else 0.03
        self.experiments = ExperimentService(show_progress=False)

    # --- Спецфункции ---------------------------------------------------------

    def check_gamma_recurrence(self) -> Tuple[bool, str]:
        error = _max_relative((gamma_fn(x + 1.0), x * gamma_fn(x)) for x in (0.3, 2.5, 7.1, -1.5))
        return error <= 1e-12, f"max_rel_err={error:.3e}"

    def check_incomplete_gamma_recurrence(self) -> Tuple[bool, str]:
        # Γ(a+1, x) = aΓ(a, x) + x^a e^{-x}
        pairs = [
            (upper_incomplete_gamma(a + 1.0, x), a * upper_incomplete_gamma(a, x) + x ** a * math.exp(-x))
            for a in (-0.5, 1.5, -2.5)
            for x in (0.3, 2.0)
        ]
        error = _max_relative(pairs)
        return error <= 1e-10, f"max_rel_err={error:.3e}"

    def check_bessel_half_order(self) -> Tuple[bool, str]:
        # K_{1/2}(x) = √(π/(2x)) e^{-x}
        error = max(
            abs(log_bessel_k(0.5, x) - (0.5 * math.log(math.pi / (2.0 * x)) - x))
            for x in (0.5, 3.0, 40.0)
        )
        return error <= 1e-8, f"max_log_err={error:.3e}"

    def check_tricomi_power(self) -> Tuple[bool, str]:
        # U(a, a+1, z) = z^{-a}
        error = max(abs(log_tricomi_u(a, a + 1.0, z) + a * math.log(z)) for a, z in ((0.5, 1.0), (3.0, 2.5), (7.5, 0.4)))
        return error <= 1e-8, f"max_log_err={error:.3e}"

    # --- Плотности и расстояния ---------------------------------------------

    def check_density_normalization(self) -> Tuple[bool, str]:
        worst = 0.0
        for gamma in self.gammas:
            for c in (1.0, 0.4):
                mass, mean = density_moments(DensityModel.generalized(gamma, c))
                worst = max(worst, abs(mass - 1.0), abs(mean - 1.0))
        return worst <= 1e-6, f"max_err={worst:.3e}"

    def check_closed_vs_integral(self) -> Tuple[bool, str]:
        grid = np.logspace(-3, 1, 20 if self.quick else 200)
        error = _max_relative(
            (rho_gamma_square_integral(float(x), gamma), rho_gamma_square_closed(float(x), gamma))
            for gamma in self.gammas
            for x in grid
        )
        return error <= 1e-8, f"max_rel_err={error:.3e}"

    def check_wd_normalization(self) -> Tuple[bool, str]:
        worst = 0.0
        for beta in DYSON_INDICES:
            mass, mean = spacing_moments(wd_model(beta))
            worst = max(worst, abs(mass - 1.0), abs(mean - 1.0))
        return worst <= 1e-9, f"max_err={worst:.3e}"

    def check_mean_spacing(self) -> Tuple[bool, str]:
        gammas = (7.0,) if self.quick else (0.5, 7.0, 50.0)
        error = _max_relative(
            (mean_spacing_quadrature(beta, gamma), mean_spacing(beta, gamma))
            for beta in DYSON_INDICES
            for gamma in gammas
        )
        return error <= 1e-8, f"max_rel_err={error:.3e}"

    # --- Сэмплеры ------------------------------------------------------------

    def check_dense_vs_tridiagonal(self) -> Tuple[bool, str]:
        config = EnsembleConfig(beta=1, n=10, m=10)
        dense = ExperimentService(show_progress=False, method="dense")
        tridiagonal = ExperimentService(show_progress=False, method="tridiagonal")
        first = dense.sample_spectra(config, self.samples, SELFCHECK_SEED).spectra
        second = tridiagonal.sample_spectra(config, self.samples, SELFCHECK_SEED + 1).spectra
        ks = ks_two_sample(first, second)
        return ks <= self.ks_limit, f"ks={ks:.4f}"

    def check_superstat_density(self) -> Tuple[bool, str]:
        config = EnsembleConfig(beta=1, n=10, m=40, gamma=2.0, family=Family.INV_CHI2)
        batch = self.experiments.sample_spectra(config, self.samples, SELFCHECK_SEED)
        values = (batch.spectra / batch.spectra.mean()).ravel()
        ks = ks_statistic(values, cdf_of(DensityModel.generalized(2.0, config.c)))
        mean_check = self.experiments.mean_eigenvalue_check(batch.spectra, config)
        passed = ks <= self.ks_limit and mean_check.passed
        return passed, f"ks={ks:.4f}, mean_z={mean_check.z_score:.2f}"

    # --- Запуск --------------------------------------------------------------

    def checks(self) -> List[Tuple[str, Callable[[], Tuple[bool, str]]]]:
        return [
            ("specfun.gamma_recurrence", self.check_gamma_recurrence),
            ("specfun.incomplete_gamma_recurrence", self.check_incomplete_gamma_recurrence),
            ("specfun.bessel_k_half_order", self.check_bessel_half_order),
            ("specfun.tricomi_u_power", self.check_tricomi_power),
            ("density.normalization", self.check_density_normalization),
            ("density.closed_vs_integral", self.check_closed_vs_integral),
            ("spacing.wd_normalization", self.check_wd_normalization),
            ("spacing.mean_spacing_closed_form", self.check_mean_spacing),
            ("sampler.dense_vs_tridiagonal", self.check_dense_vs_tridiagonal),
            ("sampler.superstat_density", self.check_superstat_density),
        ]

    def run(self) -> List[CheckResult]:
        results = []
        logging.info(f"🚀 Самопроверка ({'быстрая' if self.quick else 'полная'})")
        for name, check in self.checks():
            try:
                passed, detail = check()
            except (SuperstatError, ArithmeticError, ValueError) as e:
                passed, detail = False, f"ошибка: {e}"
            if not passed:
                logging.error(f"❌ Проверка {name} не пройдена: {detail}")
            results.append(CheckResult(name, bool(passed), detail))
        logging.info(f"📊 Пройдено {sum(r.passed for r in results)}/{len(results)} проверок")
        return results


def format_report(results: List[CheckResult]) -> str:
    """Детерминированная таблица результатов."""
    width = max(len(result.name) for result in results)
    lines = [f"{'check':<{width}}  status  detail"]
    for result in results:
        lines.append(f"{result.name:<{width}}  {'PASS' if result.passed else 'FAIL':<6}  {result.detail}")
    failed = [result.name for result in results if not result.passed]
    lines.append(f"passed {len(results) - len(failed)}/{len(results)}")
    if failed:
        lines.append("failed: " + ", ".join(failed))
    return "\n".join(lines) + "\n"
