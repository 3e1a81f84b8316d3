"""
Собственные значения вещественных симметричных матриц.

Плотная матрица приводится к трехдиагональной отражениями Хаусхолдера,
затем трехдиагональная задача решается неявным QL со сдвигами.
Собственные векторы не вычисляются.
"""

import math
from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np
from scipy import linalg

from config.settings import get_settings
from utils.exceptions import DomainError, EigenIterationError


@dataclass(frozen=True)
class SymmetricMatrix:
    """Симметричная матрица в упакованном нижнем треугольнике (построчно)."""

    dimension: int
    entries: np.ndarray

    def __post_init__(self):
        expected = self.dimension * (self.dimension + 1) // 2
        if self.dimension < 1 or len(self.entries) != expected:
            raise DomainError(f"Ожидалось {expected} элементов нижнего треугольника, получено {len(self.entries)}")

    @classmethod
    def from_dense(cls, matrix: np.ndarray) -> "SymmetricMatrix":
        matrix = np.asarray(matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DomainError("Матрица должна быть квадратной")
        rows, cols = np.tril_indices(matrix.shape[0])
        return cls(matrix.shape[0], matrix[rows, cols].copy())

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.dimension, self.dimension))
        rows, cols = np.tril_indices(self.dimension)
        dense[rows, cols] = self.entries
        dense[cols, rows] = self.entries
        return dense

    def trace(self) -> float:
        diagonal = np.cumsum(np.arange(1, self.dimension + 1)) - 1
        return float(np.sum(self.entries[diagonal]))

    def frobenius_squared(self) -> float:
        return float(np.sum(self.to_dense() ** 2))


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Симметричная трехдиагональная матрица: диагональ и поддиагональ."""

    diagonal: np.ndarray
    off_diagonal: np.ndarray

    def __post_init__(self):
        if len(self.diagonal) < 1 or len(self.off_diagonal) != len(self.diagonal) - 1:
            raise DomainError("Поддиагональ должна быть на один элемент короче диагонали")

    @property
    def dimension(self) -> int:
        return len(self.diagonal)

    def to_dense(self) -> np.ndarray:
        return (
            np.diag(self.diagonal)
            + np.diag(self.off_diagonal, 1)
            + np.diag(self.off_diagonal, -1)
        )

    def trace(self) -> float:
        return float(np.sum(self.diagonal))

    def frobenius_squared(self) -> float:
        return float(np.sum(self.diagonal ** 2) + 2.0 * np.sum(self.off_diagonal ** 2))


def tridiagonalize(a: SymmetricMatrix) -> TridiagonalMatrix:
    """Ортогональное подобие A → T отражениями Хаусхолдера."""
    work = a.to_dense()
    n = a.dimension
    for k in range(n - 2):
        x = work[k + 1:, k].copy()
        tail = np.linalg.norm(x[1:])
        if tail == 0.0:
            continue
        norm = math.hypot(x[0], tail)
        alpha = -math.copysign(norm, x[0])
        v = x
        v[0] -= alpha
        v /= np.linalg.norm(v)
        block = work[k + 1:, k + 1:]
        p = block @ v
        w = p - (v @ p) * v
        block -= 2.0 * (np.outer(v, w) + np.outer(w, v))
        work[k + 1:, k] = 0.0
        work[k, k + 1:] = 0.0
        work[k + 1, k] = work[k, k + 1] = alpha
    off = np.array([work[i + 1, i] for i in range(n - 1)])
    return TridiagonalMatrix(np.diag(work).copy(), off)


def eigenvalues_tridiag(
    t: TridiagonalMatrix,
    tol: Optional[float] = None,
    max_iterations: Optional[int] = None,
) -> np.ndarray:
    """Собственные значения T по возрастанию (неявный QL)."""
    settings = get_settings()
    tol = settings.eigen_tolerance if tol is None else tol
    max_iterations = settings.eigen_max_iterations if max_iterations is None else max_iterations

    d = [float(v) for v in t.diagonal]
    e = [float(v) for v in t.off_diagonal] + [0.0]
    n = len(d)

    for l in range(n):
        iteration = 0
        while True:
            m = l
            while m < n - 1:
                scale = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= tol * scale or abs(e[m]) < 1e-300:
                    break
                m += 1
            if m == l:
                break
            if iteration == max_iterations:
                raise EigenIterationError(l, max_iterations)
            iteration += 1

            # Сдвиг по собственному значению ведущего блока 2×2
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    return np.sort(np.array(d))


def symmetric_eigenvalues(
    a: SymmetricMatrix,
    backend: Optional[Literal["ql", "lapack"]] = None,
) -> np.ndarray:
    """Собственные значения симметричной матрицы по возрастанию."""
    backend = backend or get_settings().eigen_backend
    if backend == "lapack":
        return np.sort(linalg.eigvalsh(a.to_dense()))
    return eigenvalues_tridiag(tridiagonalize(a))


def tridiagonal_eigenvalues(
    t: TridiagonalMatrix,
    backend: Optional[Literal["ql", "lapack"]] = None,
) -> np.ndarray:
    """Собственные значения трехдиагональной матрицы выбранным решателем."""
    backend = backend or get_settings().eigen_backend
    if backend == "lapack":
        if t.dimension == 1:
            return np.array(t.diagonal, dtype=float)
        return np.sort(linalg.eigvalsh_tridiagonal(t.diagonal, t.off_diagonal))
    return eigenvalues_tridiag(t)
