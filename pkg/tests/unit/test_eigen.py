import numpy as np
import pytest

from numerics.eigen import (
    SymmetricMatrix,
    TridiagonalMatrix,
    eigenvalues_tridiag,
    symmetric_eigenvalues,
    tridiagonal_eigenvalues,
    tridiagonalize,
)
from utils.exceptions import DomainError, EigenIterationError


def random_symmetric(rng, n):
    a = rng.standard_normal((n, n))
    return a + a.T


class TestMatrices:
    def test_packed_round_trip_and_invariants(self, rng):
        dense = random_symmetric(rng, 5)
        packed = SymmetricMatrix.from_dense(dense)
        np.testing.assert_array_equal(packed.to_dense(), dense)
        assert packed.trace() == pytest.approx(np.trace(dense), rel=1e-14)
        assert packed.frobenius_squared() == pytest.approx(np.sum(dense ** 2), rel=1e-14)

    def test_rejects_non_square(self):
        with pytest.raises(DomainError):
            SymmetricMatrix.from_dense(np.zeros((2, 3)))

    def test_rejects_wrong_off_diagonal_length(self):
        with pytest.raises(DomainError):
            TridiagonalMatrix(np.ones(3), np.ones(3))


class TestHouseholder:
    @pytest.mark.parametrize("n", [3, 8, 20])
    def test_preserves_invariants(self, rng, n):
        a = SymmetricMatrix.from_dense(random_symmetric(rng, n))
        t = tridiagonalize(a)
        assert t.dimension == n
        assert t.trace() == pytest.approx(a.trace(), rel=1e-12, abs=1e-12)
        assert t.frobenius_squared() == pytest.approx(a.frobenius_squared(), rel=1e-12)

    def test_preserves_spectrum(self, rng):
        dense = random_symmetric(rng, 12)
        t = tridiagonalize(SymmetricMatrix.from_dense(dense))
        np.testing.assert_allclose(
            np.linalg.eigvalsh(t.to_dense()), np.linalg.eigvalsh(dense), rtol=0, atol=1e-10
        )

    def test_already_tridiagonal_columns_are_skipped(self):
        dense = np.diag([1.0, 2.0, 3.0, 4.0])
        t = tridiagonalize(SymmetricMatrix.from_dense(dense))
        np.testing.assert_array_equal(t.diagonal, [1.0, 2.0, 3.0, 4.0])
        np.testing.assert_array_equal(t.off_diagonal, [0.0, 0.0, 0.0])


class TestQL:
    @pytest.mark.parametrize("n", [1, 2, 6, 30])
    def test_matches_lapack(self, rng, n):
        dense = random_symmetric(rng, n)
        ours = symmetric_eigenvalues(SymmetricMatrix.from_dense(dense), backend="ql")
        reference = symmetric_eigenvalues(SymmetricMatrix.from_dense(dense), backend="lapack")
        np.testing.assert_allclose(ours, reference, rtol=0, atol=1e-10 * np.abs(reference).max())

    def test_ascending_order(self, rng):
        values = symmetric_eigenvalues(SymmetricMatrix.from_dense(random_symmetric(rng, 15)))
        assert np.all(np.diff(values) >= 0)

    def test_two_by_two_closed_form(self):
        t = TridiagonalMatrix(np.array([2.0, 2.0]), np.array([1.0]))
        np.testing.assert_allclose(eigenvalues_tridiag(t), [1.0, 3.0], atol=1e-14)

    def test_diagonal_needs_no_iterations(self):
        t = TridiagonalMatrix(np.array([3.0, -1.0, 2.0]), np.zeros(2))
        np.testing.assert_array_equal(eigenvalues_tridiag(t, max_iterations=0), [-1.0, 2.0, 3.0])

    def test_iteration_limit(self):
        t = TridiagonalMatrix(np.array([2.0, 2.0]), np.array([1.0]))
        with pytest.raises(EigenIterationError) as info:
            eigenvalues_tridiag(t, max_iterations=0)
        assert info.value.index == 0
        assert info.value.max_iterations == 0

    def test_tridiagonal_backends_agree(self, rng):
        t = TridiagonalMatrix(rng.standard_normal(10), rng.standard_normal(9))
        np.testing.assert_allclose(
            tridiagonal_eigenvalues(t, backend="ql"), tridiagonal_eigenvalues(t, backend="lapack"), atol=1e-11
        )
