"""Hypothesis spaces of exact Helmholtz solutions.

Three families: a Bessel basis J_n(kr) e^{i n theta} normalized to unit
discrete L2 norm on a reference circle of radius rho (robust to damping: the
normalization cancels the radial magnitude growth/decay), a ring of
fundamental-solution kernels outside the domain (the baseline method), and
unions of Bessel bases about several centers for non-star-shaped domains.

Order indexing: for a Bessel spec with half-order cutoff M_h, vector slot
m in [0, 2*M_h] maps to order n = m - M_h; multi-center vectors concatenate
per-center blocks in declaration order.  Evaluation of the normalized entries
goes through the log-magnitude Bessel path so that ratios survive at orders
where numerator and denominator both underflow.
"""

import warnings
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import specfun
from .errors import BasisConditionError, DomainRangeError

EIGEN_PROXIMITY_FLOOR = 1e-280
_LOG_EIGEN_FLOOR = np.log(EIGEN_PROXIMITY_FLOOR)


@dataclass(frozen=True)
class Wavenumber:
    """Complex wavenumber k = k_r + i*sigma with damping sigma >= 0."""

    k_r: float
    sigma: float = 0.0

    def __post_init__(self):
        if not self.k_r > 0.0:
            raise ValueError("k_r must be > 0")
        if self.sigma < 0.0:
            raise ValueError("sigma must be >= 0")

    @property
    def value(self):
        return complex(self.k_r, self.sigma)

    @property
    def damping_ratio(self):
        return self.sigma / self.k_r

    @classmethod
    def from_damping_ratio(cls, k_r, ratio):
        return cls(k_r=k_r, sigma=k_r * ratio)


@dataclass(frozen=True)
class BesselBasisSpec:
    """Bessel family about ``center`` with orders |n| <= m_h, normalized on
    the circle of radius ``rho`` about the same center (M = 2*m_h + 1)."""

    m_h: int
    rho: float
    center: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.m_h < 0:
            raise ValueError("m_h must be >= 0")
        if not self.rho > 0.0:
            raise ValueError("rho must be > 0")

    @property
    def size(self):
        return 2 * self.m_h + 1

    def orders(self):
        return np.arange(-self.m_h, self.m_h + 1)


@dataclass(frozen=True)
class FsBasisSpec:
    """Fundamental-solution sources equally spaced on a circle of radius
    ``radius`` about ``center``; the radius must enclose the domain."""

    radius: float
    count: int
    center: Tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError("source radius must be > 0")
        if self.count < 1:
            raise ValueError("source count must be >= 1")

    @property
    def size(self):
        return self.count

    def sources(self):
        phi = 2.0 * np.pi * np.arange(self.count) / self.count
        cx, cy = self.center
        return np.column_stack(
            [cx + self.radius * np.cos(phi), cy + self.radius * np.sin(phi)]
        )


@dataclass(frozen=True)
class MultiCenterSpec:
    """Union of Bessel bases; evaluation concatenates per-center blocks."""

    parts: Tuple[BesselBasisSpec, ...]

    def __post_init__(self):
        if len(self.parts) == 0:
            raise ValueError("multi-center spec needs at least one part")

    @property
    def size(self):
        return sum(p.size for p in self.parts)


def default_rho(center, boundary_points, margin=1.05):
    """Normalization radius: margin times the farthest boundary sample."""
    pts = np.asarray(boundary_points, dtype=float)
    d = np.hypot(pts[:, 0] - center[0], pts[:, 1] - center[1])
    return margin * float(d.max())


def check_enclosure(spec, boundary_points):
    """Warn when collocation points stick out of the normalization disk."""
    parts = spec.parts if isinstance(spec, MultiCenterSpec) else (spec,)
    for p in parts:
        if not isinstance(p, BesselBasisSpec):
            continue
        pts = np.asarray(boundary_points, dtype=float)
        d = np.hypot(pts[:, 0] - p.center[0], pts[:, 1] - p.center[1])
        if d.max() > p.rho:
            warnings.warn(
                f"collocation points reach {d.max():.4g} from center {p.center}, "
                f"outside rho = {p.rho:.4g}; the domain should satisfy "
                "Omega within O_rho",
                stacklevel=2,
            )


def _reference_logmag(spec, k):
    """ln|J_n(k rho)| for n = 0..m_h, with the eigenvalue-proximity guard."""
    lm, _ = specfun.bessel_j_batch_log(spec.m_h, k.value * spec.rho)
    bad = np.nonzero(lm < _LOG_EIGEN_FLOOR)[0]
    if bad.size:
        raise BasisConditionError(
            f"|J_n(k rho)| below {EIGEN_PROXIMITY_FLOOR} for orders {bad.tolist()}: "
            "k^2 is numerically indistinguishable from a Dirichlet eigenvalue "
            "of the normalization disk",
            orders=bad.tolist(),
        )
    return lm


def bessel_basis_matrix(spec, k, points):
    """Normalized Bessel basis values, shape (P, 2*m_h + 1).

    Column m holds u_n with n = m - m_h evaluated at each point:
    u_n(x) = J_n(kr) e^{i n theta} / (sqrt(2 pi rho) |J_n(k rho)|),
    computed as exp(ln|J_n(kr)| - ln|J_n(k rho)|) with separate phase so that
    no intermediate underflows at high order.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    dx = pts[:, 0] - spec.center[0]
    dy = pts[:, 1] - spec.center[1]
    r = np.hypot(dx, dy)
    theta = np.arctan2(dy, dx)

    lm_ref = _reference_logmag(spec, k)
    lm, ph = specfun.bessel_j_table_log(spec.m_h, k.value * r)
    norm = np.sqrt(2.0 * np.pi * spec.rho)
    with np.errstate(under="ignore"):
        mag = np.exp(lm - lm_ref[None, :] - np.log(norm))

    m_h = spec.m_h
    out = np.empty((pts.shape[0], spec.size), dtype=np.complex128)
    out[:, m_h] = mag[:, 0] * np.exp(1j * ph[:, 0])
    for n in range(1, m_h + 1):
        core = mag[:, n] * np.exp(1j * ph[:, n])
        ang = n * theta
        out[:, m_h + n] = core * np.exp(1j * ang)
        out[:, m_h - n] = (-1.0) ** n * core * np.exp(-1j * ang)
    return out


def fs_basis_matrix(spec, k, points):
    """Fundamental-solution kernel values (i/4) H^(1)_0(k |x - y_j|), shape (P, M)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    src = spec.sources()
    dx = pts[:, 0:1] - src[None, :, 0]
    dy = pts[:, 1:2] - src[None, :, 1]
    dist = np.hypot(dx, dy)
    if (dist < 1e-12).any():
        i, j = np.unravel_index(int(np.argmin(dist)), dist.shape)
        raise DomainRangeError(
            f"evaluation point {pts[i]} coincides with source {j} (singular kernel)"
        )
    return 0.25j * specfun.hankel1(0, k.value * dist)


def multicenter_basis_matrix(spec, k, points):
    """Concatenated per-center normalized Bessel blocks, shape (P, sum sizes)."""
    return np.hstack([bessel_basis_matrix(p, k, points) for p in spec.parts])


def basis_matrix(spec, k, points):
    """Dispatch on the spec type; always returns shape (P, spec.size)."""
    if isinstance(spec, BesselBasisSpec):
        return bessel_basis_matrix(spec, k, points)
    if isinstance(spec, FsBasisSpec):
        return fs_basis_matrix(spec, k, points)
    if isinstance(spec, MultiCenterSpec):
        return multicenter_basis_matrix(spec, k, points)
    raise TypeError(f"unknown basis spec {type(spec).__name__}")


def eval_bessel_basis(spec, k, x):
    """Normalized Bessel basis vector at one point, length 2*m_h + 1."""
    return bessel_basis_matrix(spec, k, np.asarray(x, dtype=float)[None, :])[0]


def eval_fs_basis(spec, k, x):
    """Fundamental-solution basis vector at one point, length M."""
    return fs_basis_matrix(spec, k, np.asarray(x, dtype=float)[None, :])[0]


def eval_multicenter_basis(spec, k, x):
    """Concatenated multi-center basis vector at one point."""
    return multicenter_basis_matrix(spec, k, np.asarray(x, dtype=float)[None, :])[0]


def graf_check(d, k, x, phi, n_trunc):
    """Residual of the Fourier-Bessel (Graf) expansion of the shifted kernel.

    Compares (i/4) H^(1)_0(k |x - d e^{i phi}|) against its truncated
    expansion sum_{|n| <= n_trunc} (i/4) H^(1)_n(kd) e^{-i n phi}
    J_n(kr) e^{i n theta}; returns |lhs - rhs|.  Links the FS and Bessel
    representations; requires |x| < d.
    """
    x = np.asarray(x, dtype=float)
    r = float(np.hypot(x[0], x[1]))
    if not r < d:
        raise ValueError(f"graf_check requires |x| = {r:.6g} < d = {d:.6g}")
    if n_trunc < 0:
        raise ValueError("n_trunc must be >= 0")
    kc = k.value
    theta = float(np.arctan2(x[1], x[0]))

    y = np.array([d * np.cos(phi), d * np.sin(phi)])
    lhs = 0.25j * specfun.hankel1(0, kc * float(np.hypot(*(x - y))))

    lmh, phh = specfun.hankel1_table_log(n_trunc, np.array([kc * d]))
    lmj, phj = specfun.bessel_j_batch_log(n_trunc, kc * r)
    # combine the +n and -n terms: both reflections carry (-1)^n, so the pair
    # reduces to 2 cos(n (theta - phi)) times the n-th product
    with np.errstate(under="ignore"):
        prod = np.exp(lmh[0] + lmj + 1j * (phh[0] + phj))
    terms = prod * np.cos(np.arange(n_trunc + 1) * (theta - phi))
    rhs = 0.25j * (terms[0] + 2.0 * terms[1:].sum())
    return float(abs(lhs - rhs))
