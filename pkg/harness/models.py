"""
Модели результатов Монте-Карло: гистограмма и отчет об эксперименте.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from ensembles.models import EnsembleConfig
from utils.serialization import dumps_canonical, loads


@dataclass(frozen=True)
class Histogram:
    """Гистограмма на [0, upper]: counts в диапазоне, overflow - число значений выше."""

    bin_edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray
    n_values: int
    overflow: int = 0

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    @property
    def total(self) -> int:
        return self.n_values + self.overflow

    def mass(self) -> float:
        return float(np.sum(self.density * self.widths))


@dataclass(frozen=True)
class MeanCheck:
    """Сравнение среднего собственного значения с теорией в единицах σ Монте-Карло."""

    observed: float
    expected: float
    sigma: float
    passed: bool

    @property
    def z_score(self) -> float:
        return abs(self.observed - self.expected) / self.sigma if self.sigma > 0 else float("inf")

    def to_payload(self) -> Dict[str, Any]:
        return {
            "observed": self.observed,
            "expected": self.expected,
            "sigma": self.sigma,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class ExperimentReport:
    """Неизменяемый отчет эксперимента; воспроизводим по (config, R, seed)."""

    kind: str
    config: EnsembleConfig
    seed: int
    R: int
    histogram: Histogram
    theory_label: Optional[str]
    theory_x: List[float]
    theory_y: List[float]
    ks: Optional[float]
    chi2_per_bin: Optional[float]
    max_deviation: Optional[float]
    runtime_seconds: float
    rescale: str = "ensemble"
    method: str = "auto"
    k: Optional[int] = None
    mean_check: Optional[MeanCheck] = None
    ks_alternatives: Dict[str, float] = field(default_factory=dict)

    def to_payload(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "config": self.config.to_payload(),
            "seed": self.seed,
            "R": self.R,
            "k": self.k,
            "rescale": self.rescale,
            "method": self.method,
            "bin_edges": self.histogram.bin_edges,
            "counts": self.histogram.counts,
            "density": self.histogram.density,
            "n_values": self.histogram.n_values,
            "overflow": self.histogram.overflow,
            "theory": self.theory_label,
            "theory_x": self.theory_x,
            "theory_y": self.theory_y,
            "ks": self.ks,
            "ks_alternatives": dict(self.ks_alternatives),
            "chi2_per_bin": self.chi2_per_bin,
            "max_deviation": self.max_deviation,
            "mean_check": self.mean_check.to_payload() if self.mean_check else None,
            "runtime_seconds": self.runtime_seconds,
        }

    def to_json(self) -> str:
        return dumps_canonical(self.to_payload())

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        payload = loads(text)
        histogram = Histogram(
            bin_edges=np.array(payload["bin_edges"], dtype=float),
            counts=np.array(payload["counts"], dtype=np.int64),
            density=np.array(payload["density"], dtype=float),
            n_values=payload["n_values"],
            overflow=payload["overflow"],
        )
        mean_check = payload.get("mean_check")
        return cls(
            kind=payload["kind"],
            config=EnsembleConfig.from_payload(payload["config"]),
            seed=payload["seed"],
            R=payload["R"],
            histogram=histogram,
            theory_label=payload["theory"],
            theory_x=list(payload["theory_x"]),
            theory_y=list(payload["theory_y"]),
            ks=payload["ks"],
            chi2_per_bin=payload["chi2_per_bin"],
            max_deviation=payload["max_deviation"],
            runtime_seconds=payload["runtime_seconds"],
            rescale=payload["rescale"],
            method=payload["method"],
            k=payload["k"],
            mean_check=MeanCheck(**mean_check) if mean_check else None,
            ks_alternatives=dict(payload["ks_alternatives"]),
        )
