"""Late-time steady state of the detector pair in the stable regime.

Once the transients have died out every correlator is a frequency integral
of the resummed response

    F_c(s) = (hbar i / 4 pi) int_0^W  w**c / (P(w) + s eps exp(i w d))  dw,

with ``P(w) = w**2 + 2 i gamma w - omega_r**2``, ``eps = 2 gamma / d`` and
``s = +-1``.  Two independent evaluations are provided:

* ``series``: expand in powers of ``eps exp(i w d) / P`` and integrate each
  term in closed form (partial fractions over the two poles of ``P``);
* ``quadrature``: subtract the ``eps = 0`` integrand, which is elementary,
  and rotate the remainder onto the imaginary axis.  In the stable regime
  the remainder is analytic in the upper half plane, so the rotated
  integrand is smooth and free of the resonance.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import special
from .gaussian import block_matrix, uncertainty
from .correlators import CorrelatorSet, late_zeroth
from .omega_integrals import rational_integral
from .params import DetectorParams, PairConfig

SERIES_RTOL = 1e-12
SERIES_MAX_TERMS = 500


@dataclass(frozen=True)
class LateTimeResult:
    f0_plus: complex
    f0_minus: complex
    f2_plus: complex
    f2_minus: complex
    sigma_late: float
    upsilon_late: float
    c_plus_late: float
    c_minus_late: float


@dataclass(frozen=True)
class EntanglementDistance:
    """Root of the late-time separability margin and two estimates of it."""

    d_ent: float
    estimate: float
    weak_coupling: float
    bracket: tuple


def _check_stable(cfg):
    p = cfg.params
    if not cfg.stable:
        raise ValueError(
            f"unstable regime: omega_r**2 = {p.omega_r**2:.6g} <= 2 gamma / d = {2 * p.gamma / cfg.d:.6g}"
        )


def _sign(sign):
    if sign in ("+", 1, +1):
        return 1
    if sign in ("-", -1):
        return -1
    raise ValueError("sign must be '+' or '-'")


def _poles(p):
    return (complex(p.omega, -p.gamma), complex(-p.omega, -p.gamma))


def _f_series(c, s, cfg, max_order=None):
    p, d = cfg.params, cfg.d
    w_max = p.omega_max
    poles = _poles(p)
    eps = 2 * p.gamma / d
    cache = {}
    # near the threshold the terms shrink only like (eps / omega_r**2)**n
    ratio = eps / p.omega_r**2
    if max_order is None and ratio ** SERIES_MAX_TERMS > SERIES_RTOL:
        raise ArithmeticError(
            f"F series needs more than {SERIES_MAX_TERMS} terms at d = {d:.6g} "
            f"({d * ratio:.6g} is the instability radius); use method='quadrature'"
        )
    if c == 0:
        head = rational_integral(poles, (1, 1), 0, 0.0, w_max)
    else:
        # w^2 / P = 1 + (omega_r^2 - 2 i gamma w) / P; the 1 is purely imaginary in F
        head = (p.omega_r**2 * rational_integral(poles, (1, 1), 0, 0.0, w_max)
                - 2j * p.gamma * rational_integral(poles, (1, 1), 1, 0.0, w_max))
    total = head
    prev = abs(head)
    rising = 0
    last = SERIES_MAX_TERMS if max_order is None else int(max_order) + 1
    for n in range(1, last):
        try:
            r = rational_integral(poles, (n + 1, n + 1), c, float(n * d), w_max, cache)
            term = (-s * eps) ** n * r
        except OverflowError:
            raise ArithmeticError(
                f"F series overflows at order {n} for (gamma, omega, d) = ({p.gamma}, {p.omega}, {d}); "
                "use method='quadrature'"
            ) from None
        total = total + term
        mag = abs(term)
        if mag < SERIES_RTOL * abs(total):
            break
        rising = rising + 1 if mag >= prev else 0
        if rising >= 5 or not np.isfinite(mag):
            raise ArithmeticError(
                f"F series diverges at (gamma, omega, d) = ({p.gamma}, {p.omega}, {d}); "
                "use method='quadrature'"
            )
        prev = mag
        cache.clear()
    else:
        if max_order is None:
            raise ArithmeticError("F series did not converge within the term limit")
    if c == 2:
        total = total + w_max
    return 1j * p.hbar / (4 * math.pi) * total


def _free_integral(c, p):
    """``int_0^W w**c / P dw`` in elementary functions."""
    p1, p2 = _poles(p)
    w = p.omega_max

    def log_piece(a):
        return np.log(w - a) - np.log(-a)

    if c == 0:
        return (log_piece(p1) - log_piece(p2)) / (p1 - p2)
    # w^2 / P = 1 + (p1^2 / (w - p1) - p2^2 / (w - p2)) / (p1 - p2)
    return w + (p1 * p1 * log_piece(p1) - p2 * p2 * log_piece(p2)) / (p1 - p2)


def _f_quadrature(c, s, cfg, rtol=1e-12):
    p, d = cfg.params, cfg.d
    eps = 2 * p.gamma / d
    wr2 = p.omega_r**2
    w_max = p.omega_max

    def delta(w):
        pw = w * w + 2j * p.gamma * w - wr2
        e = s * eps * np.exp(1j * w * d)
        return w**c * (-e) / (pw * (pw + e))

    def vertical(x0, part):
        f = (lambda y: part(delta(x0 + 1j * y)))
        # the remainder decays like exp(-y d); split at a few decay lengths
        brk = [0.0, 1.0 / d, 10.0 / d, 50.0 / d]
        out = 0.0
        for lo, hi in zip(brk[:-1], brk[1:]):
            val, err = quad(f, lo, hi, epsrel=rtol, epsabs=0.0, limit=400)
            out += val
        val, err = quad(f, brk[-1], np.inf, epsrel=rtol, epsabs=0.0, limit=400)
        return out + val

    def contour(x0):
        return vertical(x0, np.real) + 1j * vertical(x0, np.imag)

    rem = 1j * contour(0.0) - 1j * contour(w_max)
    total = _free_integral(c, p) + rem
    if not np.isfinite(total):
        raise ArithmeticError("quadrature for F did not converge")
    return 1j * p.hbar / (4 * math.pi) * total


def f_integral(c, sign, cfg: PairConfig, method="quadrature", max_order=None):
    """Resummed late-time response ``F_{c,sign}``.

    Parameters
    ----------
    c : {0, 2}
        Power of the frequency in the numerator.
    sign : {'+', '-'}
    cfg : PairConfig
        Must be in the stable regime.
    method : {'quadrature', 'series'}
    max_order : int, optional
        Truncate the series after this order of mutual influence
        (series method only).

    Raises
    ------
    ValueError
        Unstable regime or bad arguments.
    ArithmeticError
        The series does not converge (very close to the stability threshold)
        or quadrature fails.
    """
    if c not in (0, 2):
        raise ValueError("c must be 0 or 2")
    s = _sign(sign)
    _check_stable(cfg)
    if method == "series":
        return complex(_f_series(c, s, cfg, max_order))
    if max_order is not None:
        raise ValueError("max_order requires method='series'")
    if method == "quadrature":
        return complex(_f_quadrature(c, s, cfg))
    raise ValueError(f"unknown method {method!r}")


def f_values(cfg: PairConfig, method="quadrature", max_order=None):
    """``(F0+, F0-, F2+, F2-)``."""
    return tuple(f_integral(c, s, cfg, method, max_order) for c, s in ((0, "+"), (0, "-"), (2, "+"), (2, "-")))


def late_correlators(cfg: PairConfig, method="quadrature", max_order=None):
    """The late-time correlators; the QP entries vanish."""
    f0p, f0m, f2p, f2m = f_values(cfg, method, max_order)
    return CorrelatorSet(
        qq_self=2 * (f0p + f0m).real,
        pp_self=2 * (f2p + f2m).real,
        qp_self=0.0,
        qq_cross=2 * (f0p - f0m).real,
        pp_cross=2 * (f2p - f2m).real,
        qp_cross=0.0,
    )


def late_time_result(cfg: PairConfig, method="quadrature"):
    f0p, f0m, f2p, f2m = f_values(cfg, method)
    h2 = cfg.params.hbar**2 / 4
    a, b = 16 * f0p.real * f2m.real, 16 * f0m.real * f2p.real
    cp, cm = 4 * math.sqrt(max(f0p.real * f2m.real, 0.0)), 4 * math.sqrt(max(f0m.real * f2p.real, 0.0))
    if cp < cm:
        cp, cm = cm, cp
    return LateTimeResult(
        f0_plus=f0p, f0_minus=f0m, f2_plus=f2p, f2_minus=f2m,
        sigma_late=(a - h2) * (b - h2),
        upsilon_late=(16 * f0p.real * f2p.real - h2) * (16 * f0m.real * f2m.real - h2),
        c_plus_late=cp, c_minus_late=cm,
    )


def sigma_late(cfg: PairConfig, method="quadrature"):
    """Late-time ``Sigma``; negative iff the steady state is entangled."""
    return late_time_result(cfg, method).sigma_late


def upsilon_late(cfg: PairConfig, method="quadrature"):
    """Late-time uncertainty function."""
    return late_time_result(cfg, method).upsilon_late


def separability_margin(cfg: PairConfig, method="quadrature"):
    """``c_-**2 - hbar**2/4`` of the partially transposed late-time state.

    The partial transpose swaps the momenta of the symmetric and
    antisymmetric combinations, so the two squared symplectic eigenvalues
    are ``16 Re F0+ Re F2-`` and ``16 Re F0- Re F2+``.  For a close pair the
    second one drops below ``hbar**2/4``; the smaller of the two is returned.
    """
    f0p, f0m, f2p, f2m = (x.real for x in f_values(cfg, method))
    h2 = cfg.params.hbar**2 / 4
    return min(16 * f0p * f2m, 16 * f0m * f2p) - h2


def weak_coupling_margin(params: DetectorParams, d):
    """The separability margin to first order in ``gamma / d``."""
    g, om, lam, h = params.gamma, params.omega, params.lambda_cut_1, params.hbar
    d = np.asarray(d, dtype=float)
    z = 1j * om * d
    shifted = special.expn_scaled(1, z)
    pre = 1j * g * om / (math.pi * d) + 2 * g * g * lam / (math.pi**2 * d) * (1j + om * d)
    return h * h * g * lam / (math.pi * om) - h * h / om**3 * np.real(pre * shifted)


def entanglement_distance_estimate(params: DetectorParams):
    """``(pi / 2 omega) / (Lambda_1 - ln(pi / 2 Lambda_1))`` (small-``d_ent`` limit)."""
    lam = params.lambda_cut_1
    return (math.pi / (2 * params.omega)) / (lam - math.log(math.pi / (2 * lam)))


def _bisect_log(f, lo, hi, rtol):
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise ValueError("no sign change")
    a, b = math.log(lo), math.log(hi)
    fa = flo
    while b - a > 1e-3:
        m = 0.5 * (a + b)
        fm = f(math.exp(m))
        if np.sign(fm) == np.sign(fa):
            a, fa = m, fm
        else:
            b = m
    # secant polish in log d
    fb = f(math.exp(b))
    for _ in range(30):
        if fb == fa:
            break
        c = b - fb * (b - a) / (fb - fa)
        if abs(c - b) < rtol:
            b = c
            break
        a, fa, b, fb = b, fb, c, f(math.exp(c))
    return math.exp(b)


def entanglement_distance(params, bracket=None, method="quadrature", rtol=1e-6):
    """Separation below which the late-time state stays entangled.

    Parameters
    ----------
    params : DetectorParams or PairConfig
        Only the detector constants are used.
    bracket : (float, float), optional
        Search interval in ``d``.  Default ``[max(10 d_min, 2 d_ins), 10/omega]``;
        below ``d_ins`` the late-time state does not exist.

    Raises
    ------
    ValueError
        No sign change of the margin in the bracket; the message says
        whether the pair is entangled or separable throughout.
    """
    from .stability import d_ins, d_min

    if isinstance(params, PairConfig):
        params = params.params
    if bracket is None:
        bracket = (max(10 * d_min(params), 2 * d_ins(params)), 10.0 / params.omega)
    lo, hi = map(float, bracket)

    def margin(d):
        return separability_margin(PairConfig(params, d), method)

    try:
        root = _bisect_log(margin, lo, hi, rtol)
    except ValueError:
        state = "entangled" if margin(lo) < 0 else "separable"
        raise ValueError(f"no sign change in [{lo:.3g}, {hi:.3g}]: late-time state {state} throughout")
    try:
        weak = _bisect_log(lambda d: float(weak_coupling_margin(params, d)), lo, hi, rtol)
    except ValueError:
        weak = float("nan")
    return EntanglementDistance(root, entanglement_distance_estimate(params), weak, (lo, hi))


@dataclass(frozen=True)
class Upsilon0Bound:
    upsilon0: float
    lower_bound: float
    d0_estimate: float


def upsilon0_late_bound(cfg: PairConfig):
    """Late-time uncertainty function without mutual influences and its lower bound.

    Without mutual influences the late-time state violates the uncertainty
    relation once ``d`` is below roughly ``d0 = pi / (2 Lambda_1 gamma)``.
    """
    p, d = cfg.params, cfg.d
    h, g, wr = p.hbar, p.gamma, p.omega_r
    qq, pp, qq_x, pp_x = late_zeroth(cfg)
    ups = float(uncertainty(block_matrix(qq, pp, 0.0, qq_x, pp_x, 0.0), h))
    e2, e4 = math.exp(-2 * g * d), math.exp(-4 * g * d)
    bound = ((qq * pp - h * h / 4) ** 2 + h**4 * e4 / (16 * wr**4 * d**4)
             - h * h * e2 / (4 * d * d) * (h * h / (2 * wr * wr) + qq * qq + pp * pp / wr**4))
    return Upsilon0Bound(ups, float(bound), math.pi / (2 * p.lambda_cut_1 * g))


def upsilon0_bound_crossing(params, bracket=None, rtol=1e-8):
    """Separation where the lower bound of the late-time ``Upsilon`` without
    mutual influences changes sign.

    Below it the bound is negative and the uncertainty relation can fail.
    The default bracket is a decade either side of ``pi / (2 Lambda_1 gamma)``.
    """
    if isinstance(params, PairConfig):
        params = params.params
    est = math.pi / (2 * params.lambda_cut_1 * params.gamma)
    lo, hi = (est / 10, est * 10) if bracket is None else map(float, bracket)

    def bound(d):
        return upsilon0_late_bound(PairConfig(params, d)).lower_bound

    return _bisect_log(bound, lo, hi, rtol)
