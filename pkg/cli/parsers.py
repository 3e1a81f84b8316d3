"""
Общие флаги и проверки командной строки.

Все проверки выполняются до начала вычислений и сообщают об ошибке через UsageError.
"""

import argparse
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import ValidationError

from config.settings import DYSON_INDICES
from ensembles.models import EnsembleConfig, Family
from utils.exceptions import UsageError

UINT64_MAX = (1 << 64) - 1


class Command(str, Enum):
    """Подкоманды CLI."""

    SAMPLE = "sample"
    DENSITY = "density"
    SPACING = "spacing"
    SPACING_MC = "spacing-mc"
    FIT = "fit"
    SELFCHECK = "selfcheck"
    SYNTH = "synth"


def seed_type(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed должен быть целым, получено {text!r}")
    if not 0 <= value <= UINT64_MAX:
        raise argparse.ArgumentTypeError("seed должен быть 64-битным беззнаковым числом")
    return value


def add_output_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=None, help="Путь вывода (по умолчанию stdout, '-' тоже stdout)")


def add_ensemble_arguments(parser: argparse.ArgumentParser, default_samples: int) -> None:
    """Флаги ансамбля и Монте-Карло, общие для sample и spacing-mc."""
    parser.add_argument("--beta", type=int, choices=DYSON_INDICES, required=True)
    parser.add_argument("--n", type=int, required=True)
    parser.add_argument("--m", type=int, required=True)
    parser.add_argument("--gamma", type=float, default=None)
    parser.add_argument("--family", choices=[family.value for family in Family], default=Family.WL.value)
    parser.add_argument("--samples", type=int, default=default_samples)
    parser.add_argument("--bins", type=int, default=None)
    parser.add_argument("--seed", type=seed_type, default=0)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--rescale", choices=["ensemble", "sample"], default="ensemble")
    parser.add_argument("--method", choices=["auto", "dense", "tridiagonal"], default="auto")
    add_output_argument(parser)


def ensemble_config_from(args: argparse.Namespace) -> EnsembleConfig:
    """EnsembleConfig из флагов; ошибки валидации превращаются в UsageError."""
    try:
        config = EnsembleConfig(beta=args.beta, n=args.n, m=args.m, gamma=args.gamma, family=Family(args.family))
    except ValidationError as e:
        messages = "; ".join(error["msg"] for error in e.errors())
        raise UsageError(f"Некорректная конфигурация ансамбля: {messages}") from e
    if args.method == "dense" and config.beta == 4:
        raise UsageError("--method dense недоступен для β = 4")
    if args.bins is not None and args.bins < 2:
        raise UsageError("--bins должно быть ≥ 2")
    if args.workers is not None and args.workers < 1:
        raise UsageError("--workers должно быть ≥ 1")
    return config


def require_min_samples(samples: int, minimum: int) -> None:
    if samples < minimum:
        raise UsageError(f"--samples должно быть ≥ {minimum}, получено {samples}")


def parse_grid(text: str, allow_negative: bool = False) -> np.ndarray:
    """Сетка MIN:MAX:POINTS (равномерная, концы включены)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"Сетка должна иметь вид MIN:MAX:POINTS, получено {text!r}")
    try:
        lower, upper, points = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as e:
        raise UsageError(f"Некорректная сетка {text!r}") from e
    if not np.isfinite([lower, upper]).all() or not lower < upper:
        raise UsageError(f"Нужно MIN < MAX в сетке {text!r}")
    if points < 2:
        raise UsageError("В сетке нужно не меньше двух точек")
    if lower < 0 and not allow_negative:
        raise UsageError("Сетка не может начинаться с отрицательного значения")
    return np.linspace(lower, upper, points)


def positive_gamma(gamma: Optional[float], required: bool, what: str) -> Optional[float]:
    """Проверяет --gamma: обязателен и > 0 либо запрещен."""
    if required:
        if gamma is None:
            raise UsageError(f"{what} требует --gamma")
        if not gamma > 0:
            raise UsageError(f"--gamma должно быть > 0, получено {gamma}")
        return gamma
    if gamma is not None:
        raise UsageError(f"--gamma не задается для {what}")
    return None


def unit_interval(value: float, flag: str, closed: bool = True) -> float:
    ok = 0 < value <= 1 if closed else 0 < value < 1
    if not ok:
        interval = "(0, 1]" if closed else "(0, 1)"
        raise UsageError(f"{flag} должно лежать в {interval}, получено {value}")
    return value
