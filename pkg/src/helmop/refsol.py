"""Closed-form Helmholtz fields used as ground truth and boundary data.

Case A is the damped plane wave e^{i k x1}; Case B a dipole difference of
fundamental solutions with both poles outside the domain.  The pulse and
constant fields are boundary-data generators only (no interior truth).
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from . import specfun
from .basis import Wavenumber
from .errors import DomainRangeError


@dataclass(frozen=True)
class PlaneWave:
    """u(x) = e^{i k x_1} = e^{i k_r x_1} e^{-sigma x_1}."""

    k: Wavenumber
    interior_truth = True

    def eval(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.exp(1j * self.k.value * pts[:, 0])


@dataclass(frozen=True)
class Dipole:
    """u(x) = (i/4)[H^(1)_0(k|x - y1|) - H^(1)_0(k|x - y2|)], poles outside."""

    k: Wavenumber
    y1: Tuple[float, float]
    y2: Tuple[float, float]
    interior_truth = True

    def eval(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(pts.shape[0], dtype=np.complex128)
        for sign, pole in ((1.0, self.y1), (-1.0, self.y2)):
            d = np.hypot(pts[:, 0] - pole[0], pts[:, 1] - pole[1])
            if (d < 1e-12).any():
                raise DomainRangeError(f"evaluation point coincides with pole {pole}")
            out += sign * 0.25j * specfun.hankel1(0, self.k.value * d)
        return out


@dataclass(frozen=True)
class PulseBoundary:
    """Sum of Gaussian bumps exp(-width * |x - c|^2); boundary data only."""

    centers: Tuple[Tuple[float, float], ...]
    width: float = 20.0
    interior_truth = False

    def eval(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.zeros(pts.shape[0], dtype=np.complex128)
        for cx, cy in self.centers:
            d2 = (pts[:, 0] - cx) ** 2 + (pts[:, 1] - cy) ** 2
            out += np.exp(-self.width * d2)
        return out


@dataclass(frozen=True)
class ConstantBoundary:
    """f(x) = value on the boundary; boundary data only."""

    value: complex = 1.0
    interior_truth = False

    def eval(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.full(pts.shape[0], complex(self.value))


def eval_reference(field, x):
    """Field value at a single point."""
    return complex(field.eval(np.asarray(x, dtype=float)[None, :])[0])


def boundary_trace(field, collocation):
    """Pointwise field values at the collocation points (the data vector f)."""
    return field.eval(collocation.points)


def default_dipole(curve, k, offset=0.3):
    """Dipole poles placed ``offset`` outside the boundary along the outward
    normal at parameters pi/4 and 5*pi/4 (used when no pole coordinates are
    given)."""
    poles = []
    for t in (np.pi / 4.0, 5.0 * np.pi / 4.0):
        h = 1e-6
        p0 = curve.point(t)
        tang = (curve.point(t + h) - curve.point(t - h)) / (2.0 * h)
        tang /= np.linalg.norm(tang)
        normal = np.array([tang[1], -tang[0]])  # outward for a CCW curve
        poles.append(tuple(p0 + offset * normal))
    return Dipole(k=k, y1=poles[0], y2=poles[1])
