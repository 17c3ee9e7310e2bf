"""Error metrics matching the experiment reporting conventions."""

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass
class FieldSample:
    """Computed field over interior targets, with optional reference values.

    ``flags`` marks per-point validity (targets that failed the inside test
    are flagged False and excluded from norms, never from the record).
    """

    points: np.ndarray
    values: np.ndarray
    truth: Optional[np.ndarray] = None
    flags: Optional[np.ndarray] = None

    def __post_init__(self):
        p = self.points.shape[0]
        if self.values.shape[0] != p:
            raise ValueError("points/values length mismatch")
        if self.truth is not None and self.truth.shape[0] != p:
            raise ValueError("points/truth length mismatch")
        if self.flags is None:
            self.flags = np.ones(p, dtype=bool)
        elif self.flags.shape[0] != p:
            raise ValueError("points/flags length mismatch")

    @property
    def valid_count(self):
        return int(self.flags.sum())


def relative_l2(sample):
    """Relative discrete L2 error over the valid points.

    sqrt(sum |value - truth|^2) / sqrt(sum |truth|^2); numpy's pairwise
    summation keeps the reduction deterministic.  Values are reported as
    measured, never clamped (results near 1e-14 and below must survive).
    """
    if sample.truth is None:
        raise ValueError("relative_l2 needs reference values")
    m = sample.flags
    denom = np.sqrt(np.sum(np.abs(sample.truth[m]) ** 2))
    if denom == 0.0:
        raise ValueError("reference field is identically zero on valid points")
    num = np.sqrt(np.sum(np.abs(sample.values[m] - sample.truth[m]) ** 2))
    return float(num / denom)


def convergence_slope(pairs):
    """Least-squares slope of log10(error) against basis size M.

    ``pairs`` is a sequence of (M, error) with at least 3 entries and strictly
    positive errors.
    """
    pairs = np.asarray(pairs, dtype=float)
    if pairs.ndim != 2 or pairs.shape[0] < 3:
        raise ValueError("need at least 3 (M, error) pairs")
    m = pairs[:, 0]
    err = pairs[:, 1]
    if (err <= 0.0).any():
        raise ValueError("errors must be > 0 for a semilog fit")
    if np.ptp(m) == 0.0:
        raise ValueError("degenerate fit: all M equal")
    slope, _ = np.polyfit(m, np.log10(err), 1)
    return float(slope)
