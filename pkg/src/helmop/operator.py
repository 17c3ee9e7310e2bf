"""Learning and applying the discrete boundary-to-interior solution operator.

``learn`` assembles the design matrix V of basis traces at the collocation
points, resolves the Tikhonov weight, factors (V*V + alpha I), and
materializes the coefficient map T = (V*V + alpha I)^{-1} V*; applying the
operator to boundary data f is then c = T f followed by a basis evaluation
at the targets, so the expensive offline phase is paid once and each new f
costs one matrix-vector product (plus target evaluation when targets change).

The primal form a_*(x) = b(x) V* (V V* + alpha I)^{-1} is exposed for
diagnostics through the SVD of V, where the composed map is forward-stable
at any alpha (see linalg.solve_coefficients_svd); apply() and the dual path
agree with it to 1e-9 relative.  Enrichment by extra basis columns updates
the primal Cholesky factor in O(N^2) per column instead of re-learning.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from . import basis as basis_mod
from . import geometry, linalg, refsol, regularization
from .errors import FactorizationError

_EXPORT_MAGIC = "helmop operator v1"


@dataclass(frozen=True)
class ProblemSpec:
    """Domain + complex wavenumber + Dirichlet boundary field."""

    curve: "geometry.BoundaryCurve"
    k: basis_mod.Wavenumber
    boundary: object  # any field with .eval(points)


class LearnedOperator:
    """Trained solution operator for one (basis, collocation, alpha) triple.

    Immutable after construction; apply() over target batches is pure.
    """

    def __init__(self, basis_spec, collocation, k, alpha, V, coeff_map,
                 svd_bundle=None, curve=None, primal_chol=None):
        self.basis_spec = basis_spec
        self.collocation = collocation
        self.k = k
        self.alpha = float(alpha)
        self.V = V
        self.coeff_map = coeff_map  # T = (V*V + alpha I)^{-1} V*, shape (M, N)
        self._svd = svd_bundle
        self.curve = curve
        self._primal = primal_chol
        self._extra_eval = None

    @property
    def n_collocation(self):
        return self.V.shape[0]

    @property
    def n_basis(self):
        return self.V.shape[1]

    def _check_f(self, f):
        f = np.asarray(f, dtype=np.complex128)
        if f.shape != (self.n_collocation,):
            raise ValueError(
                f"boundary vector has length {f.shape[0] if f.ndim else 'scalar'}, "
                f"expected {self.n_collocation}"
            )
        return f

    def coefficients(self, f):
        """Tikhonov coefficients c* for one boundary vector."""
        f = self._check_f(f)
        if self.coeff_map is not None:
            return self.coeff_map @ f
        # enriched operators solve through the primal factor:
        # c = V* (V V* + alpha I)^{-1} f
        return self.V.conj().T @ self._primal.solve(f)

    def eval_basis(self, points):
        B = basis_mod.basis_matrix(self.basis_spec, self.k, points)
        if self._extra_eval is not None:
            B = np.hstack([B, self._extra_eval(points)])
        return B

    def apply(self, f, targets, truth=None):
        """Field values u(z_p) = b(z_p) . c*(f) at interior target points.

        Targets failing the inside test are evaluated anyway but flagged
        invalid in the returned sample (benchmark grids clip imperfectly).
        """
        from .metrics import FieldSample

        targets = np.atleast_2d(np.asarray(targets, dtype=float))
        c = self.coefficients(f)
        values = self.eval_basis(targets) @ c
        flags = None
        if self.curve is not None:
            flags = geometry.inside_mask(self.curve, targets)
        return FieldSample(points=targets, values=values, truth=truth, flags=flags)

    def operator_coefficients(self, target, via="dual"):
        """The row vector a_*(target) mapping boundary samples to the value.

        via="dual" uses a_* = b (V*V + alpha I)^{-1} V* (the coefficient map);
        via="primal" evaluates b V* (V V* + alpha I)^{-1} on the SVD of V.
        """
        b = self.eval_basis(np.asarray(target, dtype=float)[None, :])[0]
        if via == "dual":
            if self.coeff_map is None:
                return (self.V.conj().T @ self._primal.solve(b.conj())).conj()
            return b @ self.coeff_map
        if via == "primal":
            bundle = self._svd if self._svd is not None else linalg.svd(self.V)
            filt = bundle.s / (bundle.s * bundle.s + self.alpha)
            return (b @ bundle.W) * filt @ bundle.U.conj().T
        raise ValueError(f"unknown path {via!r}")

    def training_residual(self, f):
        """Boundary misfit ||f - V c*|| (not squared), the computable proxy
        for the interior error."""
        f = self._check_f(f)
        return float(np.linalg.norm(f - self.V @ self.coefficients(f)))

    def _ensure_primal(self):
        if self._primal is None:
            self._primal = linalg.factor_regularized(self.V, self.alpha, "primal")
        return self._primal

    def enrich(self, extra_columns, extra_eval=None):
        """New operator over the basis augmented with raw columns.

        ``extra_columns`` is (N, K): traces of the new functions at the
        collocation points.  The primal kernel (V V* + alpha I) absorbs each
        column as a rank-one Cholesky update (O(N^2) per column), equivalent
        to re-learning with the augmented V.  Interior evaluation of the
        enriched operator needs ``extra_eval``: a callable mapping target
        points to the (P, K) values of the new functions.
        """
        cols = np.asarray(extra_columns, dtype=np.complex128)
        if cols.ndim == 1:
            cols = cols[:, None]
        if cols.shape[0] != self.n_collocation:
            raise ValueError("extra columns must have N rows")
        fact = self._ensure_primal()
        for j in range(cols.shape[1]):
            fact = linalg.rank_one_update(fact, cols[:, j])
        op = LearnedOperator(
            basis_spec=self.basis_spec,
            collocation=self.collocation,
            k=self.k,
            alpha=self.alpha,
            V=np.hstack([self.V, cols]),
            coeff_map=None,
            curve=self.curve,
            primal_chol=fact,
        )
        if extra_eval is not None or self._extra_eval is not None:
            prev = self._extra_eval

            def combined(points, prev=prev, new=extra_eval):
                parts = []
                if prev is not None:
                    parts.append(prev(points))
                if new is not None:
                    parts.append(new(points))
                return np.hstack(parts)

            op._extra_eval = combined
        return op


def resolve_alpha(policy, basis_spec, V, f, svd_bundle=None):
    """Turn an alpha policy into a number (and keep the SVD when computed)."""
    if isinstance(policy, regularization.FixedAlpha):
        if policy.alpha <= 0.0:
            raise ValueError("fixed alpha must be > 0")
        return policy.alpha, svd_bundle
    if isinstance(policy, regularization.TheoreticalBB):
        if not isinstance(basis_spec, basis_mod.BesselBasisSpec):
            raise ValueError("theoretical_bb applies to a Bessel basis")
        return (
            regularization.alpha_theoretical_bb(
                V.shape[0], basis_spec.rho, policy.d, max(basis_spec.m_h, 1)
            ),
            svd_bundle,
        )
    if isinstance(policy, regularization.TheoreticalFS):
        if not isinstance(basis_spec, basis_mod.FsBasisSpec):
            raise ValueError("theoretical_fs applies to an FS basis")
        return (
            regularization.alpha_theoretical_fs(
                basis_spec.count, V.shape[0], basis_spec.radius
            ),
            svd_bundle,
        )
    if isinstance(policy, regularization.GcvAlpha):
        bundle = svd_bundle if svd_bundle is not None else linalg.svd(V)
        grid = regularization.default_gcv_grid(float(bundle.s[0]), policy)
        res = regularization.gcv_select(bundle, f, grid)
        return res.alpha, bundle
    raise TypeError(f"unknown alpha policy {type(policy).__name__}")


def learn(problem, basis_spec, collocation, alpha_policy):
    """Train the solution operator (the offline phase).

    Assembles V column-by-basis-function at the collocation points, resolves
    alpha (GCV uses the problem's boundary trace), factors the dual Gram
    matrix, and materializes the coefficient map.
    """
    V = basis_mod.basis_matrix(basis_spec, problem.k, collocation.points)
    basis_mod.check_enclosure(basis_spec, collocation.points)
    f0 = refsol.boundary_trace(problem.boundary, collocation)
    alpha, bundle = resolve_alpha(alpha_policy, basis_spec, V, f0)

    n, m = V.shape
    try:
        fact = linalg.factor_regularized(V, alpha, "dual")
        coeff_map = fact.solve(V.conj().T)
    except FactorizationError as exc:
        # Roundoff in the Gram assembly can push (V*V + alpha I) numerically
        # indefinite when alpha sits near eps * ||V||^2.  Fall back to the
        # LDL-based Hermitian solver, which mirrors the explicit-inverse
        # behavior of the reference algorithm.
        warnings.warn(f"dual Cholesky failed ({exc}); using LDL solve", stacklevel=2)
        G = V.conj().T @ V
        G[np.diag_indices(m)] += alpha
        coeff_map = sla.solve(G, V.conj().T, assume_a="her", check_finite=False)

    op = LearnedOperator(
        basis_spec=basis_spec,
        collocation=collocation,
        k=problem.k,
        alpha=alpha,
        V=V,
        coeff_map=coeff_map,
        svd_bundle=bundle,
        curve=problem.curve,
    )
    _spot_check(op)
    return op


def _spot_check(op):
    """One random solve against the explicit Gram product (creation invariant)."""
    rng = np.random.default_rng(0x5EED)
    f = rng.standard_normal(op.n_collocation) + 1j * rng.standard_normal(
        op.n_collocation
    )
    c = op.coefficients(f)
    rhs = op.V.conj().T @ f
    lhs = op.V.conj().T @ (op.V @ c) + op.alpha * c
    err = np.linalg.norm(lhs - rhs)
    if err > 1e-10 * np.linalg.norm(rhs):
        warnings.warn(
            f"operator solve residual {err:.3e} exceeds 1e-10 * ||V*f||: the "
            "regularized system is conditioned beyond double precision and "
            "coefficient solves are unreliable",
            stacklevel=3,
        )


def _format_complex_row(row):
    return " ".join(f"{v.real:.17g} {v.imag:.17g}" for v in row)


def _basis_spec_lines(spec):
    if isinstance(spec, basis_mod.BesselBasisSpec):
        return [
            f"basis bessel {spec.m_h} {spec.rho:.17g} "
            f"{spec.center[0]:.17g} {spec.center[1]:.17g}"
        ]
    if isinstance(spec, basis_mod.FsBasisSpec):
        return [
            f"basis fs {spec.count} {spec.radius:.17g} "
            f"{spec.center[0]:.17g} {spec.center[1]:.17g}"
        ]
    if isinstance(spec, basis_mod.MultiCenterSpec):
        lines = [f"basis multicenter {len(spec.parts)}"]
        for p in spec.parts:
            lines.append(
                f"part bessel {p.m_h} {p.rho:.17g} "
                f"{p.center[0]:.17g} {p.center[1]:.17g}"
            )
        return lines
    raise TypeError(f"cannot serialize basis spec {type(spec).__name__}")


def _parse_basis_spec(lines, idx):
    head = lines[idx].split()
    if head[1] == "bessel":
        spec = basis_mod.BesselBasisSpec(
            m_h=int(head[2]),
            rho=float(head[3]),
            center=(float(head[4]), float(head[5])),
        )
        return spec, idx + 1
    if head[1] == "fs":
        spec = basis_mod.FsBasisSpec(
            count=int(head[2]),
            radius=float(head[3]),
            center=(float(head[4]), float(head[5])),
        )
        return spec, idx + 1
    if head[1] == "multicenter":
        k = int(head[2])
        parts = []
        for j in range(k):
            tok = lines[idx + 1 + j].split()
            parts.append(
                basis_mod.BesselBasisSpec(
                    m_h=int(tok[2]),
                    rho=float(tok[3]),
                    center=(float(tok[4]), float(tok[5])),
                )
            )
        return basis_mod.MultiCenterSpec(parts=tuple(parts)), idx + 1 + k
    raise ValueError(f"unknown basis line {lines[idx]!r}")


def export_operator(op, path):
    """Versioned text dump of everything apply() needs: header (N, M, k,
    alpha, basis spec) plus the coefficient map at 17 significant digits
    (exact float64 round-trip)."""
    if op.coeff_map is None:
        raise ValueError("enriched operators lack a closed basis spec to export")
    with open(path, "w") as fh:
        fh.write(_EXPORT_MAGIC + "\n")
        fh.write(f"n {op.n_collocation}\n")
        fh.write(f"m {op.n_basis}\n")
        fh.write(f"k {op.k.k_r:.17g} {op.k.sigma:.17g}\n")
        fh.write(f"alpha {op.alpha:.17g}\n")
        for line in _basis_spec_lines(op.basis_spec):
            fh.write(line + "\n")
        fh.write("coeff_map\n")
        for i in range(op.n_basis):
            fh.write(_format_complex_row(op.coeff_map[i]) + "\n")


class ExportedOperator:
    """Re-applicable operator loaded from a file; never re-factorizes."""

    def __init__(self, basis_spec, k, alpha, coeff_map):
        self.basis_spec = basis_spec
        self.k = k
        self.alpha = alpha
        self.coeff_map = coeff_map

    @property
    def n_collocation(self):
        return self.coeff_map.shape[1]

    @property
    def n_basis(self):
        return self.coeff_map.shape[0]

    def coefficients(self, f):
        f = np.asarray(f, dtype=np.complex128)
        if f.shape != (self.n_collocation,):
            raise ValueError(
                f"boundary vector has length {f.shape[0] if f.ndim else 'scalar'}, "
                f"expected {self.n_collocation}"
            )
        return self.coeff_map @ f

    def apply(self, f, targets, truth=None):
        from .metrics import FieldSample

        targets = np.atleast_2d(np.asarray(targets, dtype=float))
        values = basis_mod.basis_matrix(self.basis_spec, self.k, targets) @ (
            self.coefficients(f)
        )
        return FieldSample(points=targets, values=values, truth=truth)


def load_operator(path):
    """Parse an exported operator file."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or lines[0] != _EXPORT_MAGIC:
        raise ValueError(f"{path}: not a helmop operator file")
    n = int(lines[1].split()[1])
    m = int(lines[2].split()[1])
    k_tok = lines[3].split()
    k = basis_mod.Wavenumber(float(k_tok[1]), float(k_tok[2]))
    alpha = float(lines[4].split()[1])
    spec, idx = _parse_basis_spec(lines, 5)
    if lines[idx] != "coeff_map":
        raise ValueError(f"{path}: expected coefficient map after header")
    T = np.empty((m, n), dtype=np.complex128)
    for i in range(m):
        vals = np.array(lines[idx + 1 + i].split(), dtype=float)
        if vals.size != 2 * n:
            raise ValueError(f"{path}: row {i} has {vals.size} numbers, wanted {2 * n}")
        T[i] = vals[0::2] + 1j * vals[1::2]
    return ExportedOperator(basis_spec=spec, k=k, alpha=alpha, coeff_map=T)
