"""Selection of the Tikhonov weight alpha.

Three sources: the convergence-theory rule alpha = N (rho/d)^{2 M_h} for the
Bessel basis (usable only when the truth's continuation radius d is known,
i.e. in convergence studies), the source-ring rule alpha = M N R^{-2M} for
the fundamental-solution baseline, and Generalized Cross-Validation for the
practical case where nothing about the solution is known.

GCV minimizes G(alpha) = ||(I - A) f||^2 / trace(I - A)^2 with the influence
matrix A = V (V*V + alpha I)^{-1} V*; on the SVD of V both the residual and
the trace reduce to O(min(N, M)) work per candidate.  Ties break toward the
larger alpha (the more stable operator).
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import linalg

ALPHA_FLOOR = 1e-300
GCV_GRID_SIZE = 60
GCV_LO_FACTOR = 1e-16
GCV_HI_FACTOR = 1.0
_TIE_RTOL = 1e-10


@dataclass(frozen=True)
class FixedAlpha:
    alpha: float


@dataclass(frozen=True)
class TheoreticalBB:
    """alpha = N (rho/d)^{2 M_h}; d is the analytic-continuation radius."""

    d: float


@dataclass(frozen=True)
class TheoreticalFS:
    """alpha = M N R^{-2M} with R the source-ring radius."""


@dataclass(frozen=True)
class GcvAlpha:
    grid_size: int = GCV_GRID_SIZE
    lo_factor: float = GCV_LO_FACTOR
    hi_factor: float = GCV_HI_FACTOR


def alpha_theoretical_bb(n, rho, d, m_h):
    """Theory rule for the Bessel basis, evaluated in the log domain.

    Requires strict enclosure 0 < rho < d; floored at 1e-300.
    """
    if not (0.0 < rho < d):
        raise ValueError(f"requires 0 < rho < d, got rho = {rho}, d = {d}")
    if n < 1 or m_h < 1:
        raise ValueError("n and m_h must be >= 1")
    log_alpha = math.log(float(n)) + 2.0 * m_h * math.log(rho / d)
    if log_alpha < math.log(ALPHA_FLOOR):
        return ALPHA_FLOOR
    return math.exp(log_alpha)


def alpha_theoretical_fs(m, n, radius):
    """Source-ring rule alpha = M N R^{-2M}, log-domain, floored at 1e-300."""
    if not radius > 1.0:
        raise ValueError(f"the rule needs R > 1, got R = {radius}")
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    log_alpha = math.log(float(m)) + math.log(float(n)) - 2.0 * m * math.log(radius)
    if log_alpha < math.log(ALPHA_FLOOR):
        return ALPHA_FLOOR
    return math.exp(log_alpha)


@dataclass(frozen=True)
class GcvResult:
    alpha: float
    curve: np.ndarray  # rows (alpha, G)
    bundle: Optional[linalg.SvdBundle] = None


def default_gcv_grid(spectral_norm, policy=GcvAlpha()):
    """Log-spaced candidates anchored to ||V||_2^2 (dimensionless grid)."""
    scale = spectral_norm * spectral_norm
    lo = policy.lo_factor * scale
    hi = policy.hi_factor * scale
    return np.geomspace(lo, hi, policy.grid_size)


def gcv_curve(V_or_bundle, f, grid):
    """G(alpha) over the grid; returns (curve, bundle)."""
    if isinstance(V_or_bundle, linalg.SvdBundle):
        bundle = V_or_bundle
    else:
        bundle = linalg.svd(V_or_bundle)
    f = np.asarray(f, dtype=np.complex128)
    n = bundle.U.shape[0]
    g = bundle.U.conj().T @ f
    # residual splits into the fixed off-range part plus filtered in-range part
    off_range = float(np.linalg.norm(f) ** 2 - np.linalg.norm(g) ** 2)
    off_range = max(off_range, 0.0)
    s2 = bundle.s * bundle.s
    g2 = np.abs(g) ** 2
    rows = np.empty((len(grid), 2))
    for i, alpha in enumerate(grid):
        shrink = alpha / (s2 + alpha)
        resid2 = off_range + float(g2 @ (shrink * shrink))
        trace = (n - bundle.s.size) + float(shrink.sum())
        rows[i] = (alpha, resid2 / (trace * trace))
    return rows, bundle


def gcv_select(V, f, grid=None):
    """Pick alpha minimizing G over the grid, ties toward larger alpha.

    ``V`` may be the design matrix or a precomputed SvdBundle (the SVD is the
    only cost shared across candidates).
    """
    if isinstance(V, linalg.SvdBundle):
        bundle = V
    else:
        bundle = linalg.svd(V)
    if grid is None:
        grid = default_gcv_grid(float(bundle.s[0]) if bundle.s.size else 1.0)
    grid = np.sort(np.asarray(grid, dtype=float))
    if grid.size == 0:
        raise ValueError("gcv grid must be nonempty")
    if (grid <= 0.0).any():
        raise ValueError("gcv grid candidates must be > 0")
    rows, bundle = gcv_curve(bundle, f, grid)
    best = 0
    for i in range(1, rows.shape[0]):
        if rows[i, 1] <= rows[best, 1] * (1.0 + _TIE_RTOL):
            best = i
    return GcvResult(alpha=float(rows[best, 0]), curve=rows, bundle=bundle)


def gcv_curve_to_csv(path, curve):
    """Write the diagnostic (alpha, G) curve with full float precision."""
    with open(path, "w") as fh:
        fh.write("alpha,gcv\n")
        for alpha, g in curve:
            fh.write(f"{alpha:.17g},{g:.17g}\n")
