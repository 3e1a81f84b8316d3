"""
Иерархия исключений проекта.

Все ошибки вычислительного ядра наследуются от SuperstatError, чтобы CLI мог
единообразно превращать их в код возврата 1, а UsageError в код 2.
"""

import math
from typing import Optional


class SuperstatError(Exception):
    """Базовая ошибка проекта."""


class DomainError(SuperstatError, ValueError):
    """Аргумент вне области определения."""


class PoleError(DomainError):
    """Полюс гамма-функции (неположительное целое)."""

    def __init__(self, x: float):
        super().__init__(f"Γ(x) имеет полюс в точке x = {x}")
        self.x = x


class ValueOverflowError(SuperstatError, OverflowError):
    """Значение функции не представимо в double; нужна логарифмическая версия."""

    def __init__(self, name: str, log_value: float):
        super().__init__(f"{name} переполняет double (log = {log_value:.6g}), используйте log-версию")
        self.name = name
        self.log_value = log_value


class GammaOverflowError(ValueOverflowError):
    """Γ(x) не представима в double, нужно использовать log_gamma."""

    def __init__(self, x: float):
        super().__init__(f"Γ({x})", math.lgamma(x) if x > 0 else math.inf)
        self.x = x


class ConvergenceError(SuperstatError):
    """Квадратура не сошлась; хранит лучшую оценку и границу ошибки."""

    def __init__(self, message: str, estimate: float, error_bound: float):
        super().__init__(f"{message} (оценка={estimate!r}, ошибка≈{error_bound!r})")
        self.estimate = estimate
        self.error_bound = error_bound


class EigenIterationError(SuperstatError):
    """QL-итерации превысили лимит на собственном значении с индексом index."""

    def __init__(self, index: int, max_iterations: int):
        super().__init__(
            f"QL не сошелся для собственного значения #{index} за {max_iterations} итераций"
        )
        self.index = index
        self.max_iterations = max_iterations


class SamplingError(SuperstatError):
    """Ошибка генерации выборки с указанием потока."""

    def __init__(self, stream_id: int, cause: Exception):
        super().__init__(f"Ошибка в потоке {stream_id}: {cause}")
        self.stream_id = stream_id
        self.cause = cause


class DataFormatError(SuperstatError):
    """Ошибка формата входных данных (CSV)."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        location = []
        if row is not None:
            location.append(f"строка {row}")
        if column is not None:
            location.append(f"столбец '{column}'")
        suffix = f" ({', '.join(location)})" if location else ""
        super().__init__(f"{message}{suffix}")
        self.row = row
        self.column = column


class UsageError(SuperstatError):
    """Некорректная комбинация флагов командной строки."""
