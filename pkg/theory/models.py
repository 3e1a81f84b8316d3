"""
Аналитические модели: спектральные плотности и законы распределения расстояний.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional

from config.settings import DYSON_INDICES
from utils.exceptions import DomainError


class DensityKind(str, Enum):
    """Вид макроскопической плотности."""

    MP = "mp"
    GEN_SQUARE = "gen_square"
    GEN_RECT = "gen_rect"


@dataclass(frozen=True)
class SupportBounds:
    """Границы носителя; upper = inf для неограниченного носителя."""

    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower < self.upper or self.lower < 0:
            raise DomainError(f"Некорректный носитель [{self.lower}, {self.upper}]")

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.upper)


@dataclass(frozen=True)
class DensityModel:
    """Плотность MP(c), ρ_γ при c = 1 или ρ_γ при c < 1."""

    kind: DensityKind
    c: float = 1.0
    gamma: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.c <= 1:
            raise DomainError(f"c должно лежать в (0, 1], получено {self.c}")
        if self.kind == DensityKind.MP:
            if self.gamma is not None:
                raise DomainError("У закона Марченко-Пастура нет параметра γ")
            return
        if self.gamma is None or not self.gamma > 0:
            raise DomainError("Обобщенная плотность требует γ > 0")
        if self.kind == DensityKind.GEN_SQUARE and self.c != 1:
            raise DomainError("GEN_SQUARE определена только при c = 1")
        if self.kind == DensityKind.GEN_RECT and not self.c < 1:
            raise DomainError("GEN_RECT требует c < 1")

    @classmethod
    def mp(cls, c: float) -> "DensityModel":
        return cls(DensityKind.MP, c=c)

    @classmethod
    def generalized(cls, gamma: float, c: float = 1.0) -> "DensityModel":
        kind = DensityKind.GEN_SQUARE if c == 1 else DensityKind.GEN_RECT
        return cls(kind, c=c, gamma=gamma)

    def label(self) -> str:
        if self.kind == DensityKind.MP:
            return f"mp(c={self.c:g})"
        return f"{self.kind.value}(gamma={self.gamma:g}, c={self.c:g})"

    def to_payload(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "c": self.c, "gamma": self.gamma}


class SpacingKind(str, Enum):
    """Вид закона распределения расстояний."""

    WD = "wd"
    WL2 = "wl2"
    GEN = "gen"


@dataclass(frozen=True)
class SpacingModel:
    """Закон расстояний с единичной массой и единичным средним.

    constants заполняется фабриками из theory.spacing (a_β, b_β, C, d, C_γ, d_γ).
    """

    kind: SpacingKind
    beta: int
    m: Optional[int] = None
    gamma: Optional[float] = None
    n_scale: float = 0.5
    constants: Dict[str, float] = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.beta not in DYSON_INDICES:
            raise DomainError(f"β должен быть одним из {DYSON_INDICES}")
        if self.kind == SpacingKind.WL2 and (self.m is None or self.m < 2):
            raise DomainError("Точный закон N = 2 требует m ≥ 2")
        if self.kind == SpacingKind.GEN and (self.gamma is None or not self.gamma > 0):
            raise DomainError("Обобщенный сюрприз требует γ > 0")
        if not self.n_scale > 0:
            raise DomainError("n_scale должен быть > 0")
        if any(not value > 0 for value in self.constants.values()):
            raise DomainError("Константы нормировки должны быть положительны")

    def label(self) -> str:
        if self.kind == SpacingKind.WD:
            return f"wd(beta={self.beta})"
        if self.kind == SpacingKind.WL2:
            return f"wl2(beta={self.beta}, m={self.m})"
        return f"gen(beta={self.beta}, gamma={self.gamma:g})"

    def to_payload(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "beta": self.beta,
            "m": self.m,
            "gamma": self.gamma,
            "constants": dict(sorted(self.constants.items())),
        }


@dataclass(frozen=True)
class BranchValue:
    """Значение асимптотики и метка режима."""

    value: float
    branch: str
