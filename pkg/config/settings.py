"""
Основные настройки проекта суперстатистических ансамблей Уишарта-Лагерра.
"""

import math
from typing import Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Настройки приложения (переменные окружения с префиксом SUPERSTAT_)."""

    model_config = SettingsConfigDict(
        env_prefix="SUPERSTAT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Основные настройки
    debug: bool = Field(default=False)

    # Логирование
    log_level: str = Field(default="INFO")
    log_format: Literal["colored", "plain"] = Field(default="colored")

    # Квадратуры
    quad_relative_tolerance: float = Field(default=1e-10, gt=0)
    quad_max_subdivisions: int = Field(default=200, ge=1)

    # Собственные значения
    eigen_tolerance: float = Field(default=1e-12, gt=0)
    eigen_max_iterations: int = Field(default=50, ge=1)
    eigen_backend: Literal["ql", "lapack"] = Field(default="ql")

    # Гистограммы и Монте-Карло
    histogram_bins: int = Field(default=60, ge=2)
    histogram_upper_quantile: float = Field(default=99.5, gt=0, le=100)
    min_bin_count: int = Field(default=100, ge=1)
    workers: int = Field(default=1, ge=1)
    show_progress: bool = Field(default=True)
    cdf_grid_points: int = Field(default=400, ge=16)

    # Подгонка эмпирических спектров
    fit_bins: int = Field(default=50, ge=2)
    fit_gamma_min: float = Field(default=0.1, gt=0)
    fit_gamma_max: float = Field(default=1000.0, gt=0)
    fit_coarse_points: int = Field(default=20, ge=3)
    fit_golden_tolerance: float = Field(default=1e-3, gt=0)
    chi2_mc_n: int = Field(default=20, ge=2)
    chi2_mc_samples: int = Field(default=400, ge=10)
    trim_default: int = Field(default=1, ge=0)


# Глобальный экземпляр настроек
settings = Settings()


def get_settings() -> Settings:
    """Функция для получения настроек."""
    return settings


class SurmiseConstants:
    """Константы сюрприза Вигнера-Дайсона a_β s^β exp(-b_β s²)."""

    WD_A = {
        1: math.pi / 2,
        2: 32 / math.pi ** 2,
        4: 2 ** 18 / (3 ** 6 * math.pi ** 3),
    }

    WD_B = {
        1: math.pi / 4,
        2: 4 / math.pi,
        4: 64 / (9 * math.pi),
    }


class ExitCodes:
    """Коды возврата командной строки."""

    OK = 0
    RUNTIME_FAILURE = 1
    USAGE = 2


# Допустимые индексы Дайсона
DYSON_INDICES = (1, 2, 4)
