"""
Модели ансамблей: конфигурация эксперимента и одна спектральная выборка.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from config.settings import DYSON_INDICES
from utils.exceptions import DomainError


class Family(str, Enum):
    """Семейство смешивающего распределения."""

    WL = "wl"
    INV_CHI2 = "invchi2"
    CHI2 = "chi2"


class EnsembleConfig(BaseModel):
    """Идентичность эксперимента: β, форма N×M, деформация γ и семейство."""

    model_config = ConfigDict(frozen=True)

    beta: int
    n: int = Field(ge=2)
    m: int
    gamma: Optional[float] = None
    family: Family = Family.WL
    # Обратная дисперсия для неискаженного WL
    eta: float = Field(default=0.5, gt=0)

    @model_validator(mode="after")
    def _validate(self) -> "EnsembleConfig":
        if self.beta not in DYSON_INDICES:
            raise ValueError(f"β должен быть одним из {DYSON_INDICES}")
        if self.m < self.n:
            raise ValueError("требуется N ≤ M")
        if self.family == Family.WL:
            if self.gamma is not None:
                raise ValueError("γ не задается для семейства WL")
        elif self.gamma is None or not self.gamma > 0:
            raise ValueError("для суперстатистических семейств требуется γ > 0")
        return self

    @property
    def c(self) -> float:
        return self.n / self.m

    @property
    def is_superstatistical(self) -> bool:
        return self.family != Family.WL

    def theoretical_mean_eigenvalue(self) -> float:
        """E[λ] = M·E[1/η]/2 для каждого семейства."""
        if self.family == Family.WL:
            return self.m / (2.0 * self.eta)
        if self.family == Family.INV_CHI2:
            return self.m * (self.gamma + 1.0) / (2.0 * self.gamma)
        shape = self.gamma + self.beta * self.n * self.m / 2.0
        return self.m * self.gamma / (2.0 * (shape - 1.0))

    def to_payload(self) -> Dict[str, Any]:
        return {
            "beta": self.beta,
            "n": self.n,
            "m": self.m,
            "gamma": self.gamma,
            "family": self.family.value,
            "eta": self.eta,
        }

    @classmethod
    def from_payload(cls, payload: Dict[str, Any]) -> "EnsembleConfig":
        return cls(**payload)


@dataclass(frozen=True)
class SpectralSample:
    """Одна реализация: смешивающая переменная ξ и упорядоченный спектр W = X†X."""

    xi: float
    eigenvalues: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.eigenvalues, dtype=float)
        if values.ndim != 1 or len(values) < 1:
            raise DomainError("Спектр должен быть непустым вектором")
        if np.any(values <= 0):
            raise DomainError(f"Собственные значения должны быть положительны, минимум {values.min():.3g}")
        if np.any(np.diff(values) < 0):
            raise DomainError("Собственные значения должны быть упорядочены по возрастанию")
        if not self.xi > 0:
            raise DomainError(f"ξ должно быть > 0, получено {self.xi}")
        object.__setattr__(self, "eigenvalues", values)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)
