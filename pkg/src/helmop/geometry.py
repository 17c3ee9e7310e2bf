"""Boundary curves, collocation sampling, inside tests, and interior grids.

Built-in curves: the rounded kite and flower benchmark shapes, a disk, and a
C-shaped annular sector (centerline radius R_c, width w, configurable gap
angle centered on the +x axis, closed by straight radial end caps).  Arbitrary
simple closed shapes load from plain-text polyline files (one ``x y`` pair per
line, '#' comments, implicitly closed).

Point membership is defined against a 4096-sample polygonal approximation of
the curve by the winding-number rule, with points closer than 1e-9 to the
polygon classified outside; interior grids are axis-aligned lattices anchored
at the origin and clipped by that test.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import HelmopError

INSIDE_MARGIN = 1e-9
POLYGON_SAMPLES = 4096
SIMPLICITY_SAMPLES = 2048


class BoundaryCurve:
    """Closed parametric curve t in [0, 2*pi) -> (x, y).

    Instances are immutable after construction and validated to be closed and
    simple (sampled non-adjacent segment-pair intersection test).
    """

    def __init__(self, kind, params, xy_func):
        self.kind = kind
        self.params = dict(params)
        self._xy = xy_func
        self._polygon_cache = {}
        closure = np.linalg.norm(self.point(2.0 * np.pi) - self.point(0.0))
        if closure > 1e-12:
            raise ValueError(f"curve endpoints do not close: gap {closure:.3e}")
        _check_simple(self)

    def point(self, t):
        """Evaluate the parametrization; scalar t -> (2,), array t -> (P, 2)."""
        t = np.asarray(t, dtype=float)
        scalar = t.ndim == 0
        xy = self._xy(np.atleast_1d(t))
        return xy[0] if scalar else xy

    def polygon(self, samples=POLYGON_SAMPLES):
        """Cached polygonal approximation at uniformly spaced parameters."""
        if samples not in self._polygon_cache:
            t = np.linspace(0.0, 2.0 * np.pi, samples, endpoint=False)
            self._polygon_cache[samples] = self.point(t)
        return self._polygon_cache[samples]

    def __repr__(self):
        ps = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"BoundaryCurve({self.kind}, {ps})"


@dataclass(frozen=True)
class CollocationSet:
    """Ordered boundary samples x_j = curve(t_j)."""

    curve: BoundaryCurve
    params: np.ndarray
    points: np.ndarray

    @property
    def count(self):
        return self.points.shape[0]


@dataclass(frozen=True)
class InteriorGrid:
    """Origin-anchored lattice points strictly inside the domain."""

    points: np.ndarray
    spacing: float

    @property
    def count(self):
        return self.points.shape[0]


def _kite_xy(t):
    x = 0.5 * np.cos(t) + 0.3 * np.cos(2.0 * t) - 0.2
    y = 0.6 * np.sin(t)
    return np.column_stack([x, y])


def _flower_xy(t):
    r = 0.5 - 0.1 * np.cos(6.0 * t)
    return np.column_stack([r * np.cos(t), r * np.sin(t)])


def _make_c_shape(r_c, width, gap_deg):
    if not (r_c > width / 2.0 > 0.0):
        raise ValueError("c_shape requires R_c > w/2 > 0")
    if not (0.0 < gap_deg < 180.0):
        raise ValueError("c_shape gap angle must lie in (0, 180) degrees")
    r_in = r_c - width / 2.0
    r_out = r_c + width / 2.0
    half_gap = np.deg2rad(gap_deg) / 2.0
    a0 = half_gap
    a1 = 2.0 * np.pi - half_gap
    span = a1 - a0
    # four segments traversed counter-clockwise around the region, with the
    # parameter allocated proportionally to arc length (constant speed)
    lengths = np.array([r_out * span, width, r_in * span, width])
    knots = np.concatenate([[0.0], np.cumsum(lengths)]) / lengths.sum()

    def xy(t):
        u = (t / (2.0 * np.pi)) % 1.0
        u = np.where(np.isclose(t, 2.0 * np.pi), 1.0, u)
        out = np.empty((u.shape[0], 2))
        seg = np.clip(np.searchsorted(knots, u, side="right") - 1, 0, 3)
        for s in range(4):
            m = seg == s
            if not m.any():
                continue
            frac = (u[m] - knots[s]) / (knots[s + 1] - knots[s])
            if s == 0:  # outer arc, a0 -> a1
                th = a0 + frac * span
                out[m, 0] = r_out * np.cos(th)
                out[m, 1] = r_out * np.sin(th)
            elif s == 1:  # radial cap at a1, outer -> inner
                rr = r_out + frac * (r_in - r_out)
                out[m, 0] = rr * np.cos(a1)
                out[m, 1] = rr * np.sin(a1)
            elif s == 2:  # inner arc, a1 -> a0
                th = a1 - frac * span
                out[m, 0] = r_in * np.cos(th)
                out[m, 1] = r_in * np.sin(th)
            else:  # radial cap at a0, inner -> outer
                rr = r_in + frac * (r_out - r_in)
                out[m, 0] = rr * np.cos(a0)
                out[m, 1] = rr * np.sin(a0)
        return out

    return xy


def load_polyline(path):
    """Vertices from a plain-text polyline file: 'x y' per line, '#' comments."""
    verts = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            parts = body.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'x y', got {body!r}")
            verts.append((float(parts[0]), float(parts[1])))
    if len(verts) < 3:
        raise ValueError(f"{path}: a closed polyline needs at least 3 vertices")
    v = np.asarray(verts)
    if np.linalg.norm(v[0] - v[-1]) < 1e-14:  # explicit closure tolerated
        v = v[:-1]
    return v


def _make_polyline(vertices):
    v = np.asarray(vertices, dtype=float)
    seg = np.diff(np.vstack([v, v[:1]]), axis=0)
    lengths = np.hypot(seg[:, 0], seg[:, 1])
    if (lengths == 0.0).any():
        raise ValueError("polyline contains a zero-length segment")
    knots = np.concatenate([[0.0], np.cumsum(lengths)]) / lengths.sum()

    def xy(t):
        u = (t / (2.0 * np.pi)) % 1.0
        u = np.where(np.isclose(t, 2.0 * np.pi), 1.0, u)
        idx = np.clip(np.searchsorted(knots, u, side="right") - 1, 0, len(v) - 1)
        frac = (u - knots[idx]) / (knots[idx + 1] - knots[idx])
        return v[idx] + frac[:, None] * seg[idx]

    return xy


_SEGMENT_EPS = 1e-12


def _segments_intersect(p0, p1, q0, q1):
    """Vectorized proper-intersection test between segment batches."""
    d1 = p1 - p0
    d2 = q1 - q0
    denom = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    dp = q0 - p0
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (dp[:, 0] * d2[:, 1] - dp[:, 1] * d2[:, 0]) / denom
        s = (dp[:, 0] * d1[:, 1] - dp[:, 1] * d1[:, 0]) / denom
    hit = (
        (np.abs(denom) > _SEGMENT_EPS)
        & (t > _SEGMENT_EPS)
        & (t < 1.0 - _SEGMENT_EPS)
        & (s > _SEGMENT_EPS)
        & (s < 1.0 - _SEGMENT_EPS)
    )
    return hit


def _check_simple(curve, samples=SIMPLICITY_SAMPLES):
    poly = curve.polygon(samples)
    a = poly
    b = np.roll(poly, -1, axis=0)
    k = samples
    for i in range(k - 2):
        js = np.arange(i + 2, k if i > 0 else k - 1)
        hit = _segments_intersect(
            np.broadcast_to(a[i], (js.size, 2)),
            np.broadcast_to(b[i], (js.size, 2)),
            a[js],
            b[js],
        )
        if hit.any():
            j = int(js[np.argmax(hit)])
            raise ValueError(
                f"curve self-intersects (sampled segments {i} and {j} cross)"
            )


def make_curve(kind, **params):
    """Build a validated boundary curve.

    Kinds and parameters
    --------------------
    kite                no parameters (benchmark shape)
    flower              no parameters (benchmark shape)
    disk                radius (default 1.0)
    c_shape             r_c (default 1.0), width (default 0.4),
                        gap_deg (default 100.0, gap centered on +x)
    polyline_file       path=... or vertices=array
    """
    if kind == "kite":
        return BoundaryCurve("kite", params, _kite_xy)
    if kind == "flower":
        return BoundaryCurve("flower", params, _flower_xy)
    if kind == "disk":
        radius = float(params.get("radius", 1.0))
        if radius <= 0.0:
            raise ValueError("disk radius must be > 0")

        def xy(t, radius=radius):
            return np.column_stack([radius * np.cos(t), radius * np.sin(t)])

        return BoundaryCurve("disk", {"radius": radius}, xy)
    if kind == "c_shape":
        r_c = float(params.get("r_c", 1.0))
        width = float(params.get("width", 0.4))
        gap_deg = float(params.get("gap_deg", 100.0))
        return BoundaryCurve(
            "c_shape",
            {"r_c": r_c, "width": width, "gap_deg": gap_deg},
            _make_c_shape(r_c, width, gap_deg),
        )
    if kind == "polyline_file":
        if "path" in params:
            vertices = load_polyline(params["path"])
        else:
            vertices = params["vertices"]
        return BoundaryCurve(
            "polyline_file",
            {"n_vertices": len(vertices)},
            _make_polyline(vertices),
        )
    raise ValueError(f"unknown curve kind {kind!r}")


def sample_collocation(curve, n, rule="uniform_parameter"):
    """N boundary points at t_j = 2*pi*j/N (or uniform arc length, opt-in)."""
    if n < 1:
        raise ValueError("collocation count must be >= 1")
    if rule == "uniform_parameter":
        t = 2.0 * np.pi * np.arange(n) / n
    elif rule == "arc_length":
        fine = np.linspace(0.0, 2.0 * np.pi, 16 * max(n, 256) + 1)
        pts = curve.point(fine)
        seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        targets = cum[-1] * np.arange(n) / n
        t = np.interp(targets, cum, fine)
    else:
        raise ValueError(f"unknown collocation rule {rule!r}")
    return CollocationSet(curve=curve, params=t, points=curve.point(t))


def _winding_and_distance(poly, pts):
    """Winding numbers and min distances of pts against a closed polygon."""
    a = poly
    b = np.roll(poly, -1, axis=0)
    wn = np.zeros(pts.shape[0], dtype=int)
    d2min = np.full(pts.shape[0], np.inf)
    chunk = max(1, int(4e6) // poly.shape[0])
    for lo in range(0, pts.shape[0], chunk):
        p = pts[lo : lo + chunk]  # (C, 2)
        ax = a[None, :, 0] - p[:, 0:1]
        ay = a[None, :, 1] - p[:, 1:2]
        bx = b[None, :, 0] - p[:, 0:1]
        by = b[None, :, 1] - p[:, 1:2]
        cross = ax * by - ay * bx
        up = (ay <= 0.0) & (by > 0.0) & (cross > 0.0)
        dn = (ay > 0.0) & (by <= 0.0) & (cross < 0.0)
        wn[lo : lo + chunk] = up.sum(axis=1) - dn.sum(axis=1)
        ex = bx - ax
        ey = by - ay
        ee = ex * ex + ey * ey
        s = np.clip(-(ax * ex + ay * ey) / ee, 0.0, 1.0)
        dx = ax + s * ex
        dy = ay + s * ey
        d2min[lo : lo + chunk] = (dx * dx + dy * dy).min(axis=1)
    return wn, np.sqrt(d2min)


def inside_mask(curve, pts):
    """Winding-number membership for an array of points, shape (P, 2).

    Points within INSIDE_MARGIN of the boundary polygon count as outside.
    """
    pts = np.atleast_2d(np.asarray(pts, dtype=float))
    wn, dist = _winding_and_distance(curve.polygon(), pts)
    return (wn != 0) & (dist > INSIDE_MARGIN)


def is_inside(curve, p):
    """Membership test for one point (x, y)."""
    return bool(inside_mask(curve, np.asarray(p, dtype=float)[None, :])[0])


def interior_grid(curve, h):
    """Origin-anchored lattice with spacing h clipped to the strict interior."""
    if h <= 0.0:
        raise ValueError("grid spacing must be > 0")
    poly = curve.polygon()
    xmin, ymin = poly.min(axis=0)
    xmax, ymax = poly.max(axis=0)
    ix = np.arange(np.ceil(xmin / h), np.floor(xmax / h) + 1)
    iy = np.arange(np.ceil(ymin / h), np.floor(ymax / h) + 1)
    if ix.size == 0 or iy.size == 0:
        raise HelmopError(f"interior grid is empty: domain thinner than h = {h}")
    gx, gy = np.meshgrid(ix * h, iy * h, indexing="ij")
    cand = np.column_stack([gx.ravel(), gy.ravel()])
    keep = inside_mask(curve, cand)
    pts = cand[keep]
    if pts.shape[0] == 0:
        raise HelmopError(f"interior grid is empty: domain thinner than h = {h}")
    return InteriorGrid(points=pts, spacing=float(h))
