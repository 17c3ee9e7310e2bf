"""Integer-order Bessel and Hankel functions of complex argument.

These are the numerical kernels behind every basis evaluation.  First-kind
functions J_n are computed in-house by a log-scaled backward (Miller)
recurrence (see :mod:`helmop._kernels`): the normalized-basis machinery needs
ratios J_n(kr)/J_n(k*rho) at orders far past the turning point, where both
values underflow double precision, so a (log-magnitude, phase) path is
exposed alongside plain values.  Third-kind functions H^(1)_n delegate to
scipy's AMOS bindings behind the same validated-range guards; the module's
test suite checks both against independent series oracles and the standard
cross-product identity.

Validated range: integer |n| <= 2000 and |z| <= 5000, with Im z >= 0
additionally required for ``hankel1``.  Outside the range the functions
refuse with :class:`~helmop.errors.DomainRangeError` rather than silently
degrading.  Values with magnitude below 1e-300 are returned as exact complex
zero; callers that need ratios of such values must use the log path.
"""

import numpy as np
import scipy.special as _sp

from . import _kernels
from .errors import DomainRangeError

MAX_ORDER = 2000
MAX_ABS_Z = 5000.0
UNDERFLOW_MAG = 1e-300
_LOG_UNDERFLOW = np.log(UNDERFLOW_MAG)


def _check_order(n):
    if n != int(n):
        raise DomainRangeError(f"order must be an integer, got {n!r}")
    if abs(int(n)) > MAX_ORDER:
        raise DomainRangeError(f"|n| = {abs(int(n))} exceeds validated range {MAX_ORDER}")
    return int(n)


def _check_arg(z):
    z = complex(z)
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise DomainRangeError(f"argument must be finite, got {z!r}")
    if abs(z) > MAX_ABS_Z:
        raise DomainRangeError(f"|z| = {abs(z):.6g} exceeds validated range {MAX_ABS_Z}")
    return z


def _values_from_log(logmag, phase):
    """Collapse (logmag, phase) to complex values with the underflow policy."""
    vals = np.exp(logmag + 1j * phase)
    vals[logmag < _LOG_UNDERFLOW] = 0.0
    return vals


def bessel_j_table_log(n_max, z):
    """Log-scaled table of J_0..J_{n_max} over a batch of points.

    Parameters
    ----------
    n_max : int
        Largest order (0 <= n_max <= MAX_ORDER).
    z : array_like, complex, shape (P,)
        Finite arguments with |z| <= MAX_ABS_Z; zeros allowed.

    Returns
    -------
    logmag, phase : ndarray, shape (P, n_max + 1)
        ln|J_n(z_p)| (-inf for exact zeros) and arg J_n(z_p).
    """
    n_max = _check_order(n_max)
    if n_max < 0:
        raise DomainRangeError("n_max must be >= 0")
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if not np.isfinite(z).all():
        raise DomainRangeError("arguments must be finite")
    if (np.abs(z) > MAX_ABS_Z).any():
        raise DomainRangeError(f"|z| exceeds validated range {MAX_ABS_Z}")

    npts = z.shape[0]
    logmag = np.full((npts, n_max + 1), -np.inf)
    phase = np.zeros((npts, n_max + 1))
    zero = z == 0.0
    logmag[zero, 0] = 0.0  # J_0(0) = 1, J_n(0) = 0

    live = ~zero
    if live.any():
        zl = z[live]
        neg = zl.imag < 0.0  # J_n(conj z) = conj(J_n(z))
        lm, ph = _kernels.jv_log_table(n_max, np.where(neg, zl.conj(), zl))
        ph = np.where(neg[:, None], -ph, ph)
        logmag[live] = lm
        phase[live] = ph
    return logmag, phase


def bessel_j_table(n_max, z):
    """Value table of J_0..J_{n_max} over a batch of points, shape (P, n_max+1)."""
    logmag, phase = bessel_j_table_log(n_max, z)
    return _values_from_log(logmag, phase)


def bessel_j_batch_log(n_max, z):
    """Log-scaled J_0..J_{n_max}(z) at a single point: two (n_max+1,) arrays."""
    z = _check_arg(z)
    logmag, phase = bessel_j_table_log(n_max, [z])
    return logmag[0], phase[0]


def bessel_j_batch(n_max, z):
    """J_0(z), ..., J_{n_max}(z) by backward recurrence with normalization.

    Stable for all orders including n > |z|; magnitudes below 1e-300 are
    returned as exact zero.
    """
    logmag, phase = bessel_j_batch_log(n_max, z)
    return _values_from_log(logmag, phase)


def bessel_j(n, z):
    """First-kind Bessel function J_n(z) for integer n and complex z.

    Negative orders are routed through J_{-n}(z) = (-1)^n J_n(z), so the
    reflection identity holds bitwise.
    """
    n = _check_order(n)
    z = _check_arg(z)
    if n < 0:
        val = bessel_j(-n, z)
        return -val if n % 2 else val
    if z == 0.0:
        return complex(1.0 if n == 0 else 0.0)
    return complex(bessel_j_batch(n, z)[n])


def bessel_j_prime(n, z):
    """Derivative J_n'(z) via the recurrence J_n' = (n/z) J_n - J_{n+1}."""
    n = _check_order(n)
    z = _check_arg(z)
    if n < 0:
        val = bessel_j_prime(-n, z)
        return -val if n % 2 else val
    if z == 0.0:
        if n == 0:
            return complex(0.0)  # -J_1(0)
        return complex(0.5 if n == 1 else 0.0)
    tab = bessel_j_batch(n + 1, z)
    if n == 0:
        return complex(-tab[1])
    return complex((n / z) * tab[n] - tab[n + 1])


def hankel1(n, z):
    """Third-kind Bessel (Hankel) function H^(1)_n(z) = J_n(z) + i Y_n(z).

    Accepts a scalar or array ``z``; every argument must be nonzero with
    Im z >= 0 (the outgoing-wave branch validated here).  Negative orders are
    routed through H^(1)_{-n} = (-1)^n H^(1)_n.
    """
    n = _check_order(n)
    sign = 1.0
    if n < 0:
        n = -n
        sign = -1.0 if n % 2 else 1.0
    z_arr = np.asarray(z, dtype=np.complex128)
    if not np.isfinite(z_arr).all():
        raise DomainRangeError("arguments must be finite")
    if (z_arr == 0.0).any():
        raise DomainRangeError("hankel1 has a logarithmic singularity at z = 0")
    if (z_arr.imag < 0.0).any():
        raise DomainRangeError("hankel1 validated only for Im z >= 0")
    if (np.abs(z_arr) > MAX_ABS_Z).any():
        raise DomainRangeError(f"|z| exceeds validated range {MAX_ABS_Z}")
    out = sign * _sp.hankel1(n, z_arr)
    if not np.isfinite(out).all():
        raise DomainRangeError(
            f"hankel1 overflowed at order {n} (argument too small for this order)"
        )
    if np.isscalar(z) or np.ndim(z) == 0:
        return complex(out)
    return out


def hankel1_table_log(n_max, z):
    """Log-scaled table of H^(1)_0..H^(1)_{n_max} over a batch of points.

    Used for forming scaled products like H_n(kd) J_n(kr) in the Graf
    cross-check at truncation orders where H_n alone would overflow.  Computed
    from seed values H_0, H_1 by the (upward-stable) three-term recurrence
    carried in scaled form.

    Returns (logmag, phase) arrays of shape (P, n_max + 1).
    """
    n_max = _check_order(n_max)
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    h0 = np.asarray(hankel1(0, z))
    npts = z.shape[0]
    logmag = np.empty((npts, n_max + 1))
    phase = np.empty((npts, n_max + 1))
    logmag[:, 0] = np.log(np.abs(h0))
    phase[:, 0] = np.angle(h0)
    if n_max == 0:
        return logmag, phase
    h1 = np.asarray(hankel1(1, z))
    logmag[:, 1] = np.log(np.abs(h1))
    phase[:, 1] = np.angle(h1)
    # upward recurrence with per-point rescaling
    scale = np.zeros(npts)
    hp, hc = h0.copy(), h1.copy()
    for m in range(1, n_max):
        hn = (2.0 * m / z) * hc - hp
        hp, hc = hc, hn
        big = np.abs(hc) > 1e250
        if big.any():
            hp[big] *= 1e-250
            hc[big] *= 1e-250
            scale[big] += np.log(1e250)
        logmag[:, m + 1] = np.log(np.abs(hc)) + scale
        phase[:, m + 1] = np.angle(hc)
    return logmag, phase
