"""Closed-form frequency integrals of rational functions times a phase.

Every vacuum correlator reduces to a sum of integrals

    int_0^W  w**j  exp(i w x)  prod_a (w - a)**(-m_a)  dw

with a handful of complex poles ``a`` off the real axis.  After a partial
fraction decomposition each piece is

    I_k(a, x) = int_0^W exp(i w x) (w - a)**(-k) dw,

which has a closed form in the scaled exponential integral
``exp(z) E_k(z)``.  That function is bounded on the whole domain used here,
so long times and huge cutoffs never overflow.
"""

import math
from functools import lru_cache

import numpy as np

from .special import expn_scaled


def _taylor_inv_power(c, m, order):
    """Taylor coefficients of ``(c + s)**(-m)`` in ``s`` up to ``s**(order-1)``."""
    out = np.empty(order, dtype=complex)
    coef = c ** (-m)
    for r in range(order):
        out[r] = coef
        coef = coef * (-(m + r)) / ((r + 1) * c)
    return out


def _taylor_power(c, j, order):
    """Taylor coefficients of ``(c + s)**j`` (nonnegative integer ``j``)."""
    out = np.zeros(order, dtype=complex)
    for r in range(min(order, j + 1)):
        out[r] = math.comb(j, r) * c ** (j - r)
    return out


def _series_mul(a, b):
    return np.convolve(a, b)[: len(a)]


@lru_cache(maxsize=4096)
def partial_fractions(poles, mults, power):
    """Coefficients ``c[(i, k)]`` with ``w**power / prod (w - p_i)**m_i = sum c / (w - p_i)**k``.

    Parameters
    ----------
    poles : tuple of complex
        Distinct poles.
    mults : tuple of int
        Multiplicities (zero entries are skipped).
    power : int
        Nonnegative numerator power; must be below the total multiplicity.
    """
    total = sum(mults)
    if power < 0:
        raise ValueError("numerator power must be nonnegative")
    if power >= total:
        raise ValueError("improper rational function: integral would diverge")
    coeffs = {}
    for i, (a, ka) in enumerate(zip(poles, mults)):
        if ka == 0:
            continue
        ser = _taylor_power(a, power, ka)
        for b, kb in zip(poles, mults):
            if b == a or kb == 0:
                continue
            ser = _series_mul(ser, _taylor_inv_power(a - b, kb, ka))
        for r in range(ka):
            coeffs[(i, ka - r)] = ser[r]
    return coeffs


def _half_line(a, k, x):
    """``int_0^inf exp(i w x) (w - a)**(-k) dw`` for ``x > 0`` (``x = 0`` if ``k >= 2``)."""
    z = 1j * a * x
    res = expn_scaled(k, z)
    if a.real > 0 and a.imag > 0:
        # the rotated contour sweeps across the pole at w = a
        res = res + 2j * np.pi * np.exp(z + (k - 1) * np.log(-z) - math.lgamma(k))
    # through the log: complex ** underflows to nan for huge |a|
    return np.exp((1 - k) * np.log(-a)) * res


def pole_integral(a, k, x, w_max):
    """``int_0^W exp(i w x) (w - a)**(-k) dw`` for real ``x`` (scalar or array).

    ``a`` must lie off the real axis and ``W`` must be finite and positive.
    """
    a = complex(a)
    if a.imag == 0:
        raise ValueError("pole on the integration path")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(x.shape, dtype=complex)
    zero = x == 0
    if zero.any():
        if k == 1:
            out[zero] = np.log(w_max - a) - np.log(-a)
        else:
            out[zero] = ((w_max - a) ** (1 - k) - (-a) ** (1 - k)) / (1 - k)
    pos = x > 0
    neg = x < 0
    for mask, aa, xx, flip in ((pos, a, x[pos], False), (neg, a.conjugate(), -x[neg], True)):
        if not mask.any():
            continue
        val = _half_line(aa, k, xx) - np.exp(1j * w_max * xx) * _half_line(aa - w_max, k, xx)
        out[mask] = np.conj(val) if flip else val
    return complex(out[0]) if scalar else out


def rational_integral(poles, mults, power, x, w_max, cache=None):
    """``int_0^W w**power exp(i w x) / prod (w - p)**m dw`` summed over partial fractions.

    ``cache`` may be a dict shared between calls with the same ``x`` values;
    single-pole integrals are then computed once per ``(pole, k, x)``.
    """
    poles = tuple(complex(p) for p in poles)
    mults = tuple(int(m) for m in mults)
    coeffs = partial_fractions(poles, mults, int(power))
    xkey = np.asarray(x, dtype=float).tobytes() if cache is not None else None
    total = 0.0
    for (i, k), c in coeffs.items():
        if c == 0:
            continue
        if cache is None:
            val = pole_integral(poles[i], k, x, w_max)
        else:
            key = (poles[i], k, w_max, xkey)
            val = cache.get(key)
            if val is None:
                val = cache[key] = pole_integral(poles[i], k, x, w_max)
        total = total + c * val
    return total
