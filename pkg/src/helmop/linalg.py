"""Dense complex linear algebra for the regularized least-squares solve.

The learned operator needs factorizations of the two regularized Gram
matrices, (V V* + alpha I) of size N (primal) and (V* V + alpha I) of size M
(dual); alpha > 0 makes both Hermitian positive definite, so a Cholesky
factorization without pivoting realizes the explicit inverses of the operator
formulas stably.  Gram assembly and the factorizations are delegated to
BLAS/LAPACK.  Enrichment of an existing primal factorization by one basis
column is an O(N^2) Hermitian rank-one Cholesky update.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import FactorizationError, NumericalError

_PIVOT_FLOOR = 1e-300  # squared-pivot threshold signalling catastrophic scaling


def _as_matrix(V):
    V = np.asarray(V, dtype=np.complex128)
    if V.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {V.shape}")
    if not np.isfinite(V).all():
        raise ValueError("matrix entries must be finite")
    return V


@dataclass(frozen=True)
class RegularizedFactorization:
    """Cholesky factor of (V V* + alpha I) or (V* V + alpha I).

    ``chol`` is the lower-triangular factor L with L L* equal to the
    regularized Gram matrix; ``mode`` records which of the two forms it is.
    Immutable; concurrent solves against one factorization are safe.
    """

    mode: str  # "primal" (N x N) or "dual" (M x M)
    alpha: float
    chol: np.ndarray
    n_rows: int
    n_cols: int

    @property
    def size(self):
        return self.chol.shape[0]

    def solve(self, b):
        """Solve (Gram + alpha I) x = b for one vector or a stack of columns."""
        b = np.asarray(b, dtype=np.complex128)
        if b.shape[0] != self.size:
            raise ValueError(f"rhs length {b.shape[0]} != factor size {self.size}")
        return sla.cho_solve((self.chol, True), b, check_finite=False)


def _cholesky(G):
    L, info = sla.lapack.zpotrf(G, lower=1, clean=1, overwrite_a=0)
    if info > 0:
        raise FactorizationError(
            f"Cholesky breakdown at leading minor {info}", index=info - 1
        )
    if info < 0:
        raise NumericalError(f"zpotrf: illegal argument {-info}")
    d = np.real(np.diag(L))
    if (d * d < _PIVOT_FLOOR).any():
        idx = int(np.argmin(d))
        raise FactorizationError(
            f"factorization pivot below {_PIVOT_FLOOR} at index {idx}", index=idx
        )
    return L


def factor_regularized(V, alpha, mode="dual"):
    """Factor (V V* + alpha I) [primal] or (V* V + alpha I) [dual].

    Parameters
    ----------
    V : (N, M) complex ndarray
        Design matrix, columns = basis functions at collocation points.
    alpha : float
        Tikhonov weight, > 0; guarantees positive definiteness.
    mode : "primal" | "dual"

    Returns
    -------
    RegularizedFactorization
    """
    V = _as_matrix(V)
    alpha = float(alpha)
    if alpha <= 0.0:
        raise ValueError("alpha must be > 0")
    if mode not in ("primal", "dual"):
        raise ValueError(f"unknown mode {mode!r}")
    n, m = V.shape
    if mode == "primal":
        G = V @ V.conj().T
        size = n
    else:
        G = V.conj().T @ V
        size = m
    G[np.diag_indices(size)] += alpha
    return RegularizedFactorization(mode, alpha, _cholesky(G), n, m)


def solve_coefficients(fact, V, f):
    """Tikhonov coefficients c* = (V* V + alpha I)^{-1} V* f.

    Works with either factorization mode through the matrix identity
    V* (V V* + alpha I)^{-1} = (V* V + alpha I)^{-1} V*.  ``f`` may be one
    vector of length N or a stack of columns.
    """
    V = _as_matrix(V)
    f = np.asarray(f, dtype=np.complex128)
    n, m = V.shape
    if f.shape[0] != n:
        raise ValueError(f"boundary vector length {f.shape[0]} != N = {n}")
    if (fact.n_rows, fact.n_cols) != (n, m):
        raise ValueError("factorization was built for a different matrix shape")
    if fact.mode == "dual":
        return fact.solve(V.conj().T @ f)
    return V.conj().T @ fact.solve(f)


def rank_one_update(fact, new_column):
    """Primal factorization after appending one column w to V.

    (V V* + alpha I) gains w w*; the Cholesky factor is updated in O(N^2) by
    a sequence of complex Givens rotations, equivalent (to rounding) to
    refactoring the augmented matrix.
    """
    if fact.mode != "primal":
        raise ValueError("rank-one update requires a primal-mode factorization")
    w = np.asarray(new_column, dtype=np.complex128).copy()
    if w.shape != (fact.size,):
        raise ValueError(f"column length {w.shape} != ({fact.size},)")
    L = fact.chol.copy()
    n = fact.size
    for k in range(n):
        a = L[k, k].real
        r = np.hypot(a, abs(w[k]))
        c = a / r
        s = w[k] / r
        L[k, k] = r
        if k + 1 < n:
            col = L[k + 1 :, k].copy()
            tail = w[k + 1 :]
            L[k + 1 :, k] = c * col + np.conj(s) * tail
            w[k + 1 :] = c * tail - s * col
    return RegularizedFactorization(
        "primal", fact.alpha, L, fact.n_rows, fact.n_cols + 1
    )


@dataclass(frozen=True)
class SvdBundle:
    """Thin SVD of the design matrix: V = U diag(s) W*.

    ``s`` is descending and nonnegative; U (N x r) and W (M x r) have
    orthonormal columns with r = min(N, M).
    """

    U: np.ndarray
    s: np.ndarray
    W: np.ndarray

    def reconstruct(self):
        return (self.U * self.s) @ self.W.conj().T


def solve_coefficients_svd(bundle, alpha, f):
    """Coefficients by the primal formula V* (V V* + alpha I)^{-1} f, evaluated
    on the SVD of V where the composition is exact.

    A factored N x N solve materializes the kernel component f_perp / alpha
    that V* must then cancel, losing ~eps*||V||^2/alpha relative accuracy; on
    the singular system the composed map is just the diagonal s/(s^2+alpha),
    forward-stable for every alpha > 0.  This is the reference evaluation of
    the primal path; the Cholesky form of (V V* + alpha I) is kept for the
    rank-one enrichment machinery.
    """
    alpha = float(alpha)
    if alpha <= 0.0:
        raise ValueError("alpha must be > 0")
    f = np.asarray(f, dtype=np.complex128)
    g = bundle.U.conj().T @ f
    filt = bundle.s / (bundle.s * bundle.s + alpha)
    if g.ndim > 1:
        return bundle.W @ (filt[:, None] * g)
    return bundle.W @ (filt * g)


def svd(V):
    """Thin SVD as an SvdBundle; reports non-convergence instead of stalling."""
    V = _as_matrix(V)
    if min(V.shape) < 1:
        raise ValueError("svd requires at least one row and one column")
    try:
        U, s, Wh = np.linalg.svd(V, full_matrices=False)
    except np.linalg.LinAlgError:
        try:
            U, s, Wh = sla.svd(V, full_matrices=False, lapack_driver="gesvd")
        except Exception as exc:  # pragma: no cover - driver-dependent
            raise NumericalError(f"SVD failed to converge: {exc}") from exc
    return SvdBundle(U=U, s=s, W=Wh.conj().T)
