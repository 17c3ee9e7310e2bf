"""Regularized factorizations, rank-one updates, and the SVD bundle."""

import numpy as np
import pytest

from helmop import linalg
from helmop.errors import FactorizationError


def random_system(rng, n, m):
    V = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    f = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return V, f


def gauss_solve(A, b):
    """Dense Gaussian elimination with partial pivoting; independent oracle."""
    A = A.astype(np.complex128).copy()
    b = b.astype(np.complex128).copy()
    n = A.shape[0]
    for k in range(n):
        p = k + np.argmax(np.abs(A[k:, k]))
        if p != k:
            A[[k, p]] = A[[p, k]]
            b[[k, p]] = b[[p, k]]
        for i in range(k + 1, n):
            fac = A[i, k] / A[k, k]
            A[i, k:] -= fac * A[k, k:]
            b[i] -= fac * b[k]
    x = np.zeros(n, dtype=np.complex128)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - A[k, k + 1 :] @ x[k + 1 :]) / A[k, k]
    return x


class TestFactorRegularized:
    def test_identity_matrix(self):
        fact = linalg.factor_regularized(np.eye(3), 1.0, mode="dual")
        b = np.array([2.0, 4.0, -6.0], dtype=complex)
        assert np.allclose(fact.solve(b), b / 2.0, rtol=1e-14)

    def test_factor_reproduces_gram(self):
        rng = np.random.default_rng(0)
        V, _ = random_system(rng, 8, 5)
        fact = linalg.factor_regularized(V, 1e-3, mode="dual")
        G = V.conj().T @ V + 1e-3 * np.eye(5)
        L = fact.chol
        assert (
            np.linalg.norm(np.tril(L) @ np.tril(L).conj().T - G)
            <= 1e-12 * np.linalg.norm(G)
        )

    def test_scalar_dual(self):
        fact = linalg.factor_regularized(np.array([[2.0 + 0.0j]]), 1.0, mode="dual")
        assert np.allclose(fact.solve(np.array([1.0 + 0j])), 1.0 / 5.0)

    def test_rejects_bad_alpha(self):
        with pytest.raises(ValueError):
            linalg.factor_regularized(np.eye(2), 0.0)

    def test_pivot_floor_reported(self):
        V = np.diag([1.0, 1e-200]).astype(complex)
        with pytest.raises(FactorizationError) as err:
            linalg.factor_regularized(V, 1e-310 * 1e10, mode="dual")
        assert err.value.index >= 0


class TestSolveCoefficients:
    def test_zero_rhs(self):
        rng = np.random.default_rng(1)
        V, _ = random_system(rng, 6, 3)
        fact = linalg.factor_regularized(V, 1e-2)
        c = linalg.solve_coefficients(fact, V, np.zeros(6, dtype=complex))
        assert np.all(c == 0.0)

    def test_orthonormal_columns_small_alpha(self):
        rng = np.random.default_rng(2)
        A, _ = random_system(rng, 10, 4)
        Q, _ = np.linalg.qr(A)
        c_true = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        f = Q @ c_true
        fact = linalg.factor_regularized(Q, 1e-14)
        c = linalg.solve_coefficients(fact, Q, f)
        assert np.linalg.norm(c - Q.conj().T @ f) <= 1e-10 * np.linalg.norm(c_true)

    def test_matches_gaussian_elimination_oracle(self):
        rng = np.random.default_rng(3)
        V, f = random_system(rng, 10, 4)
        alpha = 1e-2
        fact = linalg.factor_regularized(V, alpha)
        c = linalg.solve_coefficients(fact, V, f)
        G = V.conj().T @ V + alpha * np.eye(4)
        c_oracle = gauss_solve(G, V.conj().T @ f)
        assert np.linalg.norm(c - c_oracle) <= 1e-11 * np.linalg.norm(c_oracle)

    def test_dimension_mismatch(self):
        rng = np.random.default_rng(4)
        V, f = random_system(rng, 6, 3)
        fact = linalg.factor_regularized(V, 1e-2)
        with pytest.raises(ValueError):
            linalg.solve_coefficients(fact, V, f[:-1])

    def test_primal_dual_identity(self):
        # Eq.(3) path on the SVD vs Eq.(4) path on the Cholesky factor
        rng = np.random.default_rng(5)
        for _ in range(30):
            n = int(rng.integers(4, 24))
            m = int(rng.integers(1, n))
            V, f = random_system(rng, n, m)
            alpha = 10.0 ** rng.uniform(-8, -2)
            b = rng.standard_normal(m) + 1j * rng.standard_normal(m)
            cp = linalg.solve_coefficients_svd(linalg.svd(V), alpha, f)
            cd = linalg.solve_coefficients(
                linalg.factor_regularized(V, alpha, "dual"), V, f
            )
            assert abs(b @ cp - b @ cd) <= 1e-9 * max(abs(b @ cd), 1e-30)

    def test_cholesky_primal_composition_matches_at_moderate_alpha(self):
        # the factored N x N route is only forward-accurate for alpha not
        # too far below eps*||V||^2; check it in its supported regime
        rng = np.random.default_rng(15)
        V, f = random_system(rng, 12, 5)
        alpha = 1e-2
        cp = linalg.solve_coefficients(
            linalg.factor_regularized(V, alpha, "primal"), V, f
        )
        cd = linalg.solve_coefficients(
            linalg.factor_regularized(V, alpha, "dual"), V, f
        )
        assert np.linalg.norm(cp - cd) <= 1e-9 * np.linalg.norm(cd)


class TestRankOneUpdate:
    def test_zero_column_changes_nothing(self):
        rng = np.random.default_rng(6)
        V, f = random_system(rng, 5, 3)
        fact = linalg.factor_regularized(V, 1e-2, "primal")
        up = linalg.rank_one_update(fact, np.zeros(5, dtype=complex))
        assert np.allclose(up.solve(f), fact.solve(f), rtol=1e-14)

    def test_matches_refactorization_oracle(self):
        rng = np.random.default_rng(7)
        V, f = random_system(rng, 4, 2)
        w = np.zeros(4, dtype=complex)
        w[0] = 1.0
        up = linalg.rank_one_update(linalg.factor_regularized(V, 1e-2, "primal"), w)
        full = linalg.factor_regularized(np.hstack([V, w[:, None]]), 1e-2, "primal")
        assert np.linalg.norm(up.solve(f) - full.solve(f)) <= 1e-9 * np.linalg.norm(
            full.solve(f)
        )

    def test_sequential_updates_match_batch(self):
        rng = np.random.default_rng(8)
        V, f = random_system(rng, 12, 4)
        cols = rng.standard_normal((12, 5)) + 1j * rng.standard_normal((12, 5))
        fact = linalg.factor_regularized(V, 1e-3, "primal")
        for j in range(5):
            fact = linalg.rank_one_update(fact, cols[:, j])
        batch = linalg.factor_regularized(np.hstack([V, cols]), 1e-3, "primal")
        assert np.linalg.norm(fact.solve(f) - batch.solve(f)) <= 1e-8 * np.linalg.norm(
            batch.solve(f)
        )

    def test_residual_monotone_under_appends(self):
        rng = np.random.default_rng(9)
        V, f = random_system(rng, 10, 2)
        # alpha -> 0 limit via SVD pseudo-inverse on the growing matrix
        prev = np.inf
        M = V
        for _ in range(5):
            c = np.linalg.pinv(M) @ f
            resid = np.linalg.norm(f - M @ c)
            assert resid <= prev + 1e-12
            prev = resid
            w = rng.standard_normal(10) + 1j * rng.standard_normal(10)
            M = np.hstack([M, w[:, None]])

    def test_mode_error(self):
        rng = np.random.default_rng(10)
        V, _ = random_system(rng, 5, 3)
        fact = linalg.factor_regularized(V, 1e-2, "dual")
        with pytest.raises(ValueError):
            linalg.rank_one_update(fact, np.zeros(3, dtype=complex))


class TestSvd:
    def test_diagonal(self):
        b = linalg.svd(np.diag([3.0, 2.0, 1.0]).astype(complex))
        assert np.allclose(b.s, [3.0, 2.0, 1.0])

    def test_reconstruction(self):
        rng = np.random.default_rng(11)
        V, _ = random_system(rng, 6, 3)
        b = linalg.svd(V)
        assert np.linalg.norm(b.reconstruct() - V) <= 1e-10 * np.linalg.norm(V)
        assert np.all(np.diff(b.s) <= 0)
        assert np.allclose(b.U.conj().T @ b.U, np.eye(3), atol=1e-10)
        assert np.allclose(b.W.conj().T @ b.W, np.eye(3), atol=1e-10)

    def test_rank_one(self):
        rng = np.random.default_rng(12)
        u = rng.standard_normal(5) + 1j * rng.standard_normal(5)
        v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        b = linalg.svd(np.outer(u, v.conj()))
        assert abs(b.s[0] - np.linalg.norm(u) * np.linalg.norm(v)) <= 1e-12 * b.s[0]
        assert np.all(b.s[1:] <= 1e-12 * b.s[0])
