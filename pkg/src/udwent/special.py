"""Complex-argument exponential, sine and cosine integrals.

All functions accept scalars or arrays and broadcast like numpy ufuncs.
Evaluation uses power series near the origin, a modified-Lentz continued
fraction in the intermediate range and the asymptotic series far out.

The scaled exponential integral ``expn_scaled(n, z) = exp(z) * E_n(z)`` is
the workhorse of the correlator module: it stays bounded on the whole
domain the physics reaches, so products such as ``exp(i a x) E_1(i a x)``
never overflow.
"""

import numpy as np

EULER = float(np.euler_gamma)

SERIES_RADIUS = 2.0
ASYMPTOTIC_RADIUS = 40.0
TRIG_SERIES_RADIUS = 4.0
# exp(700) is close to the float64 ceiling
MAX_IMAG = 700.0


def _as_complex(z):
    return np.asarray(z, dtype=complex)


def _finish(out, scalar):
    if scalar:
        return complex(out.reshape(-1)[0])
    return out


def _e1_series(z):
    """E1 from the convergent power series; good for |z| <= ~4."""
    z = _as_complex(z)
    total = np.zeros_like(z)
    term = np.ones_like(z)
    for k in range(1, 120):
        term = term * (-z) / k
        inc = term / k
        total = total + inc
        if np.all(np.abs(inc) <= 1e-17 * np.maximum(np.abs(total), 1e-300)):
            break
    return -EULER - np.log(z) - total


def _expn_scaled_cf(n, z, max_iter=20000):
    """exp(z) E_n(z) from the continued fraction (modified Lentz)."""
    z = _as_complex(z)
    tiny = 1e-300
    b = z + n
    c = np.full_like(z, 1.0 / tiny)
    d = 1.0 / b
    h = d.copy()
    done = np.zeros(z.shape, dtype=bool)
    for i in range(1, max_iter):
        an = -i * (n - 1 + i)
        b = b + 2.0
        d = an * d + b
        d = np.where(np.abs(d) < tiny, tiny, d)
        c = b + an / c
        c = np.where(np.abs(c) < tiny, tiny, c)
        d = 1.0 / d
        delta = c * d
        h = np.where(done, h, h * delta)
        done |= np.abs(delta - 1.0) < 1e-16
        if done.all():
            return h
    raise ArithmeticError("continued fraction for E_n did not converge")


def _expn_scaled_asymptotic(n, z):
    """exp(z) E_n(z) ~ (1/z) sum_k (-1)^k (n)_k / z^k for large |z|."""
    z = _as_complex(z)
    total = np.zeros_like(z)
    term = 1.0 / z
    prev = np.full(z.shape, np.inf)
    active = np.ones(z.shape, dtype=bool)
    for k in range(0, 200):
        mag = np.abs(term)
        # stop at the smallest term of the divergent series
        active &= mag < prev
        total = np.where(active, total + term, total)
        prev = np.where(active, mag, prev)
        term = term * (-(n + k)) / z
        if not active.any() or np.all(mag < 1e-17 * np.abs(total)):
            break
    return total


def expn_scaled(n, z):
    """Return ``exp(z) * E_n(z)`` on the principal branch.

    Parameters
    ----------
    n : int
        Order, ``n >= 1``.
    z : complex or array_like
        Argument; ``z = 0`` is only allowed for ``n >= 2``.
    """
    if n < 1:
        raise ValueError("order must be >= 1")
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(_as_complex(z))
    if not np.all(np.isfinite(z)):
        raise ValueError("non-finite argument")
    out = np.empty_like(z)
    r = np.abs(z)
    zero = r == 0
    if zero.any():
        if n == 1:
            raise ValueError("E_1 has a logarithmic singularity at z = 0")
        out[zero] = 1.0 / (n - 1)
    small = (r <= SERIES_RADIUS) & ~zero
    large = r >= ASYMPTOTIC_RADIUS
    mid = ~small & ~large & ~zero
    if small.any():
        zs = z[small]
        s = np.exp(zs) * _e1_series(zs)
        for m in range(1, n):
            s = (1.0 - zs * s) / m
        out[small] = s
    if mid.any():
        out[mid] = _expn_scaled_cf(n, z[mid])
    if large.any():
        out[large] = _expn_scaled_asymptotic(n, z[large])
    return _finish(out, scalar)


def e1(z):
    """Exponential integral E1(z), principal branch (cut along z <= 0)."""
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(_as_complex(z))
    if np.any(z == 0):
        raise ValueError("E1 is singular at z = 0")
    if np.any(np.real(z) < -MAX_IMAG):
        raise OverflowError("E1(z) overflows for Re z < -700")
    out = np.empty_like(z)
    small = np.abs(z) <= SERIES_RADIUS
    out[small] = _e1_series(z[small])
    if (~small).any():
        zl = z[~small]
        out[~small] = np.exp(-zl) * expn_scaled(1, zl)
    return _finish(out, scalar)


def _check_growth(z):
    if np.any(np.abs(np.imag(z)) > MAX_IMAG):
        raise OverflowError("|Im z| too large: sine/cosine integrals overflow")


def _trig_series(z):
    """Power series for Si(z) and Cin(z) = int_0^z (1 - cos t)/t dt."""
    z2 = z * z
    si = z.copy()
    cin = np.zeros_like(z)
    term = z.copy()  # z^(2k+1)/(2k+1)!
    for k in range(1, 80):
        term = term * (-z2) / ((2 * k) * (2 * k + 1))
        inc_si = term / (2 * k + 1)
        si = si + inc_si
        # z^(2k)/(2k)! = term * (2k+1) / z
        ev = term * (2 * k + 1) / np.where(z == 0, 1.0, z)
        inc_cin = -ev / (2 * k)
        cin = cin + inc_cin
        if np.all(np.abs(inc_si) <= 1e-17 * np.maximum(np.abs(si), 1e-300)) and np.all(
            np.abs(inc_cin) <= 1e-17 * np.maximum(np.abs(cin), 1e-300)
        ):
            break
    return si, cin


def _si_ci_right(z):
    """Si, Ci for Re z >= 0 via E1 at +-iz."""
    a = e1(1j * z)
    b = e1(-1j * z)
    si = 0.5 * np.pi + (a - b) / 2j
    ci = -0.5 * (a + b)
    return si, ci


def si(z):
    """Sine integral Si(z) = int_0^z sin(t)/t dt (entire)."""
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(_as_complex(z))
    _check_growth(z)
    out = np.empty_like(z)
    small = np.abs(z) <= TRIG_SERIES_RADIUS
    if small.any():
        out[small] = _trig_series(z[small])[0]
    big = ~small
    if big.any():
        zb = z[big]
        flip = np.real(zb) < 0
        w = np.where(flip, -zb, zb)
        s, _ = _si_ci_right(w)
        out[big] = np.where(flip, -s, s)
    return _finish(out, scalar)


def ci(z):
    """Cosine integral Ci(z) = gamma_e + log z + int_0^z (cos t - 1)/t dt.

    Principal branch of the logarithm, so ``Ci(-z) = Ci(z) - i pi`` for
    ``Im z > 0`` and ``+ i pi`` for ``Im z < 0``.
    """
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(_as_complex(z))
    if np.any(z == 0):
        raise ValueError("Ci has a logarithmic singularity at z = 0")
    _check_growth(z)
    out = np.empty_like(z)
    small = np.abs(z) <= TRIG_SERIES_RADIUS
    if small.any():
        zs = z[small]
        out[small] = EULER + np.log(zs) - _trig_series(zs)[1]
    big = ~small
    if big.any():
        zb = z[big]
        flip = np.real(zb) < 0
        w = np.where(flip, -zb, zb)
        _, c = _si_ci_right(w)
        # even part Cin is shared; only the log differs between z and -z
        c = np.where(flip, c + np.log(zb) - np.log(w), c)
        out[big] = c
    return _finish(out, scalar)


def _ci_pair(w):
    """Ci(w) + Ci(-w) on the principal branch of the logarithm."""
    return 2.0 * ci(w) + np.log(-w) - np.log(w)


def _script_arg(x, omega, gamma):
    x = np.asarray(x, dtype=float)
    if np.any(x == 0):
        raise ValueError("script S/C undefined at x = 0; use the merge-distance limit")
    if omega <= 0 or gamma < 0:
        raise ValueError("need omega > 0 and gamma >= 0")
    return x, (omega + 1j * gamma) * np.abs(x)


def script_s(x, omega, gamma):
    """0.5 (Ci[w] + Ci[-w]) sin w - Si[w] cos w with w = (omega + i gamma) x.

    Ci[-w] is taken on the principal branch.  Writing Si and Ci through E1
    the combination collapses to

        -(pi/2) exp(i w) + (i/2) [h(i w) - h(-i w)],   h(z) = exp(z) E1(z),

    for ``x > 0``, which stays bounded where Si and Ci separately overflow.
    The function is odd in ``x``.
    """
    x, w = _script_arg(x, omega, gamma)
    h1 = expn_scaled(1, 1j * w)
    h2 = expn_scaled(1, -1j * w)
    val = -0.5 * np.pi * np.exp(1j * w) + 0.5j * (h1 - h2)
    return np.sign(x) * val


def script_c(x, omega, gamma):
    """0.5 (Ci[w] + Ci[-w]) cos w + Si[w] sin w with w = (omega + i gamma) x.

    Even in ``x``; for ``x > 0`` equals ``-(i pi/2) exp(i w) - [h(i w) + h(-i w)] / 2``.
    """
    _, w = _script_arg(x, omega, gamma)
    h1 = expn_scaled(1, 1j * w)
    h2 = expn_scaled(1, -1j * w)
    return -0.5j * np.pi * np.exp(1j * w) - 0.5 * (h1 + h2)


def script_s_direct(x, omega, gamma):
    """Same as ``script_s`` evaluated literally from Si and Ci (may overflow)."""
    w = (omega + 1j * gamma) * np.asarray(x, dtype=float)
    return 0.5 * _ci_pair(w) * np.sin(w) - si(w) * np.cos(w)


def script_c_direct(x, omega, gamma):
    """Same as ``script_c`` evaluated literally from Si and Ci (may overflow)."""
    w = (omega + 1j * gamma) * np.asarray(x, dtype=float)
    return 0.5 * _ci_pair(w) * np.cos(w) + si(w) * np.sin(w)


def si_series(z):
    """Si by power series only (diagnostic / crossover checks)."""
    return _trig_series(np.atleast_1d(_as_complex(z)))[0]


def e1_series(z):
    """E1 by power series only (diagnostic / crossover checks)."""
    return _e1_series(np.atleast_1d(_as_complex(z)))


def e1_continued_fraction(z):
    """E1 by continued fraction only (diagnostic / crossover checks)."""
    z = np.atleast_1d(_as_complex(z))
    return np.exp(-z) * _expn_scaled_cf(1, z)

