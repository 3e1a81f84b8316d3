"""
Адаптивные квадратуры поверх scipy.integrate.quad.

Интегрируемые степенные особенности на концах снимаются заменой
t = a + u^{1/(1+p)}, где p - показатель поведения (t - a)^p.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy import integrate as sp_integrate

from config.settings import get_settings
from utils.exceptions import ConvergenceError, DomainError

# exp(-LOG_CUTOFF) считается пренебрежимо малым относительно пика
LOG_CUTOFF = 80.0


class QuadratureSpec(BaseModel):
    """Описание интеграла: отрезок или полуось, точность, подсказки об особенностях."""

    model_config = ConfigDict(frozen=True)

    lower: float = 0.0
    upper: float = math.inf
    relative_tolerance: float = Field(default_factory=lambda: get_settings().quad_relative_tolerance, gt=0)
    max_subdivisions: int = Field(default_factory=lambda: get_settings().quad_max_subdivisions, ge=1)
    lower_exponent: Optional[float] = None
    upper_exponent: Optional[float] = None
    breakpoints: Tuple[float, ...] = ()
    # Во сколько раз оценка ошибки может превысить запрошенную точность
    acceptance_factor: float = Field(default=1e4, ge=1)

    @field_validator("lower_exponent", "upper_exponent")
    @classmethod
    def _integrable(cls, value: Optional[float]) -> Optional[float]:
        if value is not None and value <= -1:
            raise ValueError("показатель особенности должен быть > -1")
        return value

    @model_validator(mode="after")
    def _ordered(self) -> "QuadratureSpec":
        if not self.lower < self.upper:
            raise ValueError("нижний предел должен быть меньше верхнего")
        if math.isinf(self.lower):
            raise ValueError("поддерживаются отрезки и полуоси [a, inf)")
        return self

    @property
    def semi_infinite(self) -> bool:
        return math.isinf(self.upper)


@dataclass(frozen=True)
class QuadratureResult:
    """Оценка интеграла и граница абсолютной ошибки."""

    value: float
    error_bound: float
    evaluations: int


def _quad_segment(
    g: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec,
    points: Sequence[float] = (),
) -> Tuple[float, float, int]:
    kwargs = dict(epsabs=0.0, epsrel=spec.relative_tolerance, limit=spec.max_subdivisions, full_output=1)
    inner = [p for p in points if a < p < b]
    if inner and math.isfinite(b):
        kwargs["points"] = inner
    result = sp_integrate.quad(g, a, b, **kwargs)
    value, error, info = result[0], result[1], result[2]
    return value, error, int(info.get("neval", 0))


def _check(value: float, error: float, spec: QuadratureSpec, evaluations: int) -> QuadratureResult:
    if not math.isfinite(value):
        raise ConvergenceError("Квадратура вернула нечисловое значение", value, error)
    limit = spec.acceptance_factor * spec.relative_tolerance * abs(value)
    if error > limit and error > 1e-300:
        raise ConvergenceError("Квадратура не достигла требуемой точности", value, error)
    if error > spec.relative_tolerance * abs(value) and error > 1e-300:
        logging.warning(
            f"⚠️ Квадратура принята с ослабленной точностью: значение={value:.12g}, ошибка={error:.3g}, "
            f"запрошено {spec.relative_tolerance:.1e}"
        )
    return QuadratureResult(value=value, error_bound=error, evaluations=evaluations)


def _with_lower_substitution(f: Callable[[float], float], a: float, p: float) -> Callable[[float], float]:
    q = 1.0 / (1.0 + p)

    def g(u: float) -> float:
        if u <= 0.0:
            return 0.0
        return f(a + u ** q) * q * u ** (q - 1.0)

    return g


def _with_upper_substitution(f: Callable[[float], float], b: float, p: float) -> Callable[[float], float]:
    q = 1.0 / (1.0 + p)

    def g(u: float) -> float:
        if u <= 0.0:
            return 0.0
        return f(b - u ** q) * q * u ** (q - 1.0)

    return g


def integrate_detailed(f: Callable[[float], float], spec: QuadratureSpec) -> QuadratureResult:
    """Интеграл f по spec с оценкой ошибки."""
    knots: List[float] = sorted({spec.lower, *[p for p in spec.breakpoints if spec.lower < p < spec.upper]})
    if spec.lower_exponent is not None and spec.upper_exponent is not None and len(knots) == 1:
        if spec.semi_infinite:
            knots.append(spec.lower + 1.0)
        else:
            knots.append(0.5 * (spec.lower + spec.upper))
    knots.append(spec.upper)

    total, total_error, evaluations = 0.0, 0.0, 0
    last = len(knots) - 2
    for index in range(len(knots) - 1):
        a, b = knots[index], knots[index + 1]
        if index == 0 and spec.lower_exponent is not None:
            p = spec.lower_exponent
            g = _with_lower_substitution(f, a, p)
            value, error, neval = _quad_segment(g, 0.0, (b - a) ** (1.0 + p) if math.isfinite(b) else math.inf, spec)
        elif index == last and spec.upper_exponent is not None and math.isfinite(b):
            p = spec.upper_exponent
            g = _with_upper_substitution(f, b, p)
            value, error, neval = _quad_segment(g, 0.0, (b - a) ** (1.0 + p), spec)
        else:
            value, error, neval = _quad_segment(f, a, b, spec)
        total += value
        total_error += error
        evaluations += neval
    return _check(total, total_error, spec, evaluations)


def integrate(f: Callable[[float], float], spec: QuadratureSpec) -> float:
    """Интеграл f по spec; при несходимости ConvergenceError с лучшей оценкой."""
    return integrate_detailed(f, spec).value


def _cutoff(h: Callable[[float], float], direction: float, limit: float = 1e6) -> float:
    """Первое v = 2^k, при котором h(direction*v) < -LOG_CUTOFF."""
    v = 1.0
    while v < limit:
        value = h(direction * v)
        if not (value > -LOG_CUTOFF):
            return v
        v *= 2.0
    return limit


def integrate_peaked(
    h: Callable[[float], float],
    relative_tolerance: Optional[float] = None,
    max_subdivisions: Optional[int] = None,
) -> QuadratureResult:
    """∫ exp(h(v)) dv по всей прямой для вогнутой h с максимумом h(0) ≈ 0.

    Пределы обрезаются там, где h < -80; при вогнутости хвосты дальше убывают
    не медленнее экспоненты.
    """
    settings = get_settings()
    tol = relative_tolerance or settings.quad_relative_tolerance
    limit = max_subdivisions or settings.quad_max_subdivisions

    def g(v: float) -> float:
        value = h(v)
        if not (value > -745.0):
            return 0.0
        return math.exp(min(value, 700.0))

    left = _cutoff(h, -1.0)
    right = _cutoff(h, 1.0)
    spec = QuadratureSpec(lower=-left, upper=right, relative_tolerance=tol, max_subdivisions=limit, breakpoints=(0.0,))
    return integrate_detailed(g, spec)


def log_integrate_peaked(
    log_f: Callable[[float], float],
    peak: float,
    width: float,
    relative_tolerance: Optional[float] = None,
) -> float:
    """log ∫ exp(log_f(u)) du для вогнутой log_f с пиком peak и шириной width."""
    if not (width > 0 and math.isfinite(width)):
        raise DomainError(f"Некорректная ширина пика: {width}")
    top = log_f(peak)
    if not math.isfinite(top):
        raise ConvergenceError("Значение в пике нечисловое", top, math.inf)

    def h(v: float) -> float:
        value = log_f(peak + width * v) - top
        return value if value == value else -math.inf

    # завышенная ширина: оба края уже за отсечкой, сужаем до пика
    for _ in range(200):
        if h(-1.0) > -LOG_CUTOFF or h(1.0) > -LOG_CUTOFF:
            break
        width /= 2.0

    result = integrate_peaked(h, relative_tolerance)
    if result.value <= 0.0:
        raise ConvergenceError("Интеграл в логарифмической шкале неположителен", result.value, result.error_bound)
    logging.debug(f"🔄 log-квадратура: пик={peak:.6g}, ширина={width:.3g}, вычислений={result.evaluations}")
    return top + math.log(width) + math.log(result.value)
