"""Heisenberg-picture mode functions of the detector pair.

Each detector obeys a damped-oscillator equation driven by the local field
and, after a retardation ``d``, by the other detector.  Solving order by
order in that retarded coupling gives terms that switch on at ``t = n d``
and are built from the iterated convolutions

    W_0(t) = exp(i Omega t),
    W_n(t) = int_0^t sin(Omega (t - s)) W_{n-1}(s) ds.

``W_n`` is a polynomial times ``exp(+-i Omega t)`` and is kept in closed
form (``PolyExpWave``) so that derivatives and late times stay exact.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .params import PairConfig

MAX_ORDER = 12


class PolyExpWave:
    """Sum of ``poly_sigma(t) * exp(i sigma Omega t)`` over integer ``sigma``.

    Parameters
    ----------
    omega : float
        Base angular frequency.
    terms : dict
        Maps ``sigma`` to ascending polynomial coefficients (complex).
    """

    __slots__ = ("omega", "terms")

    def __init__(self, omega, terms):
        self.omega = float(omega)
        self.terms = {
            int(s): np.asarray(c, dtype=complex) for s, c in terms.items() if len(c) and np.any(c)
        }

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for s, c in self.terms.items():
            poly = np.zeros(t.shape, dtype=complex)
            for a in c[::-1]:
                poly = poly * t + a
            out = out + poly * np.exp(1j * s * self.omega * t)
        return out

    @property
    def degree(self):
        return max((len(c) - 1 for c in self.terms.values()), default=0)

    def conj(self):
        """Wave whose value is the complex conjugate for real ``t``."""
        return PolyExpWave(self.omega, {-s: np.conj(c) for s, c in self.terms.items()})

    def derivative(self):
        out = {}
        for s, c in self.terms.items():
            dc = 1j * s * self.omega * c
            if len(c) > 1:
                dc[:-1] += c[1:] * np.arange(1, len(c))
            out[s] = dc
        return PolyExpWave(self.omega, out)

    def scale(self, k):
        return PolyExpWave(self.omega, {s: k * c for s, c in self.terms.items()})

    def __add__(self, other):
        out = {s: c.copy() for s, c in self.terms.items()}
        for s, c in other.terms.items():
            if s in out:
                n = max(len(out[s]), len(c))
                a = np.zeros(n, dtype=complex)
                a[: len(out[s])] += out[s]
                a[: len(c)] += c
                out[s] = a
            else:
                out[s] = c.copy()
        return PolyExpWave(self.omega, out)

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def convolve_sin(self):
        """Return ``int_0^t sin(Omega (t - s)) f(s) ds`` as a new wave."""
        om = self.omega
        out = PolyExpWave(om, {})
        # sin(Omega u) = (e^{i Omega u} - e^{-i Omega u}) / 2i
        for rho, pref in ((1, 1.0 / 2j), (-1, -1.0 / 2j)):
            for s, c in self.terms.items():
                out = out + _exp_poly_integral(om, rho, s, c).scale(pref)
        return out


def _exp_poly_integral(om, rho, sigma, coeffs):
    """``exp(i rho Omega t) int_0^t s^k exp(i (sigma - rho) Omega s) ds`` summed over k."""
    a = 1j * (sigma - rho) * om
    res = {}
    if sigma == rho:
        c = np.zeros(len(coeffs) + 1, dtype=complex)
        c[1:] = coeffs / np.arange(1, len(coeffs) + 1)
        res[rho] = c
        return PolyExpWave(om, res)
    # int_0^t s^k e^{as} ds
    #   = e^{at} sum_j (-1)^j k!/(k-j)! t^{k-j} / a^{j+1} - (-1)^k k! / a^{k+1}
    poly = np.zeros(len(coeffs), dtype=complex)
    const = 0j
    for k, ck in enumerate(coeffs):
        if ck == 0:
            continue
        for j in range(k + 1):
            poly[k - j] += ck * (-1) ** j * math.perm(k, j) / a ** (j + 1)
        const -= ck * (-1) ** k * math.factorial(k) / a ** (k + 1)
    # exp(i rho Omega t) e^{a t} = exp(i sigma Omega t)
    res[sigma] = poly
    res[rho] = np.array([const])
    return PolyExpWave(om, res)


@lru_cache(maxsize=None)
def _w_n_cached(n, omega):
    if n == 0:
        return PolyExpWave(omega, {1: [1.0]})
    return _w_n_cached(n - 1, omega).convolve_sin()


def w_n(n, omega, max_order=MAX_ORDER):
    """Closed form of the n-th iterated convolution ``W_n``."""
    n = int(n)
    if n < 0:
        raise ValueError("order must be nonnegative")
    if n > max_order:
        raise ValueError(f"order {n} exceeds the supported maximum {max_order}")
    return _w_n_cached(n, float(omega))


@dataclass(frozen=True)
class Oscillator:
    """Damped-oscillator constants shared by the full and reduced modes.

    ``omega`` is the oscillation frequency, ``omega_r`` fixes the initial
    velocity of the complex mode and ``lam`` is the field coupling.
    """

    gamma: float
    omega: float
    omega_r: float
    lam: float

    @classmethod
    def from_params(cls, p):
        return cls(p.gamma, p.omega, p.omega_r, p.lambda0)

    @property
    def s1(self):
        return 0.5 * (1.0 - (self.omega_r + 1j * self.gamma) / self.omega)

    @property
    def s2(self):
        return 0.5 * (1.0 + (self.omega_r + 1j * self.gamma) / self.omega)

    @property
    def poles(self):
        """Poles ``(p1, p2)`` of the driven response in the field frequency."""
        return (self.omega - 1j * self.gamma, -self.omega - 1j * self.gamma)

    def m1(self, w):
        return -1.0 / (w - self.poles[0])

    def m2(self, w):
        return -1.0 / (w - self.poles[1])

    def mu(self, w):
        return 0.5 * (self.m1(w) - self.m2(w))


def _retarded(n, t, d):
    t = np.asarray(t, dtype=float)
    tau = t - n * d
    on = tau > 0 if n > 0 else tau >= 0
    return tau, on


def _q_n_parts(n, t, cfg, derivative=False):
    p = cfg.params
    osc = Oscillator.from_params(p)
    tau, on = _retarded(n, t, cfg.d)
    tt = np.where(on, tau, 0.0)
    w = w_n(n, p.omega)
    kap = cfg.coupling_ratio**n
    val = osc.s1 * w(tt) + osc.s2 * np.conj(w(tt))
    damp = np.exp(-p.gamma * tt)
    if derivative:
        dw = w.derivative()(tt)
        val = -p.gamma * val + osc.s1 * dw + osc.s2 * np.conj(dw)
    return np.where(on, kap * damp * val, 0.0)


def q_n(n, t, cfg: PairConfig):
    """n-th order term of the detector mode; exactly zero for ``t < n d``."""
    return _q_n_parts(n, t, cfg)


def q_n_dot(n, t, cfg: PairConfig):
    """Time derivative of ``q_n`` from the closed form."""
    return _q_n_parts(n, t, cfg, derivative=True)


def _partial(t, cfg, order, parity, derivative):
    if order > MAX_ORDER:
        raise ValueError(f"order {order} exceeds the supported maximum {MAX_ORDER}")
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape, dtype=complex)
    for n in range(parity, order + 1, 2):
        out = out + _q_n_parts(n, t, cfg, derivative)
    return out


def q_self(t, cfg, order=MAX_ORDER, derivative=False):
    """Sum of even-order terms: the mode carrying a detector's own initial data."""
    return _partial(t, cfg, order, 0, derivative)


def q_cross(t, cfg, order=MAX_ORDER, derivative=False):
    """Sum of odd-order terms: the other detector's initial data, retarded."""
    return _partial(t, cfg, order, 1, derivative)


def series_exact_until(cfg, order):
    """The truncated sums are exact for ``t`` below this time."""
    return (order + 1) * cfg.d


# Field-driven part of the detector mode ------------------------------------


@dataclass(frozen=True)
class ModeTerm:
    """One term of a field-driven mode in the frequency ``w``.

    Its value is

        scalar * wave(tau) * exp(-gamma tau)            (homogeneous), or
        scalar * exp(-i w tau)                          (particular),

    times ``w**power / ((w - p1)**m1 * (w - p2)**m2)``.  ``tau = t - n d``.
    """

    n: int
    scalar: complex
    power: int
    m1: int
    m2: int
    wave: PolyExpWave = None

    @property
    def oscillating(self):
        return self.wave is None


def mode_terms(n, osc: Oscillator, kappa, derivative=False):
    """Terms of ``g_n``, the n-th order field-driven mode (phase factored out).

    ``g_n(tau; w) = (lam/Omega) kappa^n { mu^{n+1} e^{-i w tau}
        + (1/2) e^{-gamma tau} sum_m mu^{n-m} [M2 W_m(tau) - M1 conj(W_m(tau))] }``

    with ``mu = -Omega / ((w - p1)(w - p2))``, ``M1 = -1/(w - p1)`` and
    ``M2 = -1/(w - p2)``.  With ``derivative=True`` the terms of
    ``d g_n / d tau`` are returned instead.
    """
    om, g = osc.omega, osc.gamma
    base = osc.lam / om * kappa**n
    out = []
    sc = base * (-om) ** (n + 1)
    if derivative:
        out.append(ModeTerm(n, -1j * sc, 1, n + 1, n + 1))
    else:
        out.append(ModeTerm(n, sc, 0, n + 1, n + 1))
    for m in range(n + 1):
        w = w_n(m, om)
        pref = 0.5 * base * (-om) ** (n - m)
        for wave, sgn, m1, m2 in ((w, -1.0, n - m, n - m + 1), (w.conj(), 1.0, n - m + 1, n - m)):
            if derivative:
                wave = wave.derivative() - wave.scale(g)
            out.append(ModeTerm(n, sgn * pref, 0, m1, m2, wave))
    return out


def evaluate_mode_terms(terms, tau, w, osc: Oscillator):
    """Direct numeric value of a term list at scalar ``tau`` and array ``w``."""
    w = np.asarray(w, dtype=float)
    p1, p2 = osc.poles
    out = np.zeros(w.shape, dtype=complex)
    if tau < 0:
        return out
    for term in terms:
        r = term.scalar * w**term.power / ((w - p1) ** term.m1 * (w - p2) ** term.m2)
        if term.oscillating:
            out = out + r * np.exp(-1j * w * tau)
        else:
            out = out + r * term.wave(tau) * np.exp(-osc.gamma * tau)
    return out


def site_sign(n):
    """Order-n terms of detector A carry the field phase at ``(-1)**n z_A``."""
    return 1 if n % 2 == 0 else -1


def q_plus_mode(t, omega, k1_phase_parity, cfg, order, derivative=False):
    """Field-driven detector mode amplitudes, one per order.

    Returns an array ``g[n]`` of complex amplitudes at field frequency
    ``omega``; the caller multiplies term n by ``exp(i k1 s_n z)`` where
    ``s_n = k1_phase_parity * (-1)**n``.
    """
    if omega <= 0:
        raise ValueError("field frequency must be positive")
    osc = Oscillator.from_params(cfg.params)
    kap = cfg.coupling_ratio
    out = np.zeros(order + 1, dtype=complex)
    for n in range(order + 1):
        tau = float(t) - n * cfg.d
        if tau <= 0 and n > 0:
            continue
        if tau < 0:
            continue
        out[n] = evaluate_mode_terms(mode_terms(n, osc, kap, derivative), tau, np.array([omega]), osc)[0]
    return out


def field_mode_value(t, omega, k1, detector, cfg, order, derivative=False):
    """Full field-driven mode of detector ``'A'`` or ``'B'`` including phases."""
    z = -0.5 * cfg.d if detector == "A" else 0.5 * cfg.d
    amps = q_plus_mode(t, omega, 1, cfg, order, derivative)
    phases = np.array([np.exp(1j * k1 * site_sign(n) * z) for n in range(order + 1)])
    return np.sum(amps * phases)


# Short-distance reduction ----------------------------------------------------


@dataclass(frozen=True)
class ReducedParams:
    """Normal-mode constants of a closely spaced pair.

    ``omega_plus``/``omega_minus`` are the square roots of the effective
    stiffness; the damped oscillation frequencies are ``omega_tilde_*``.
    """

    gamma_plus: float
    gamma_minus: float
    omega_plus: float
    omega_minus: float
    lambda_plus: float
    lambda_minus: float
    omega_r: float

    @property
    def omega_tilde_plus(self):
        return math.sqrt(self.omega_plus**2 - self.gamma_plus**2)

    @property
    def omega_tilde_minus(self):
        return math.sqrt(self.omega_minus**2 - self.gamma_minus**2)

    def oscillator(self, sign):
        """Oscillator constants of the ``+`` (sign=+1) or ``-`` normal mode."""
        if sign > 0:
            return Oscillator(self.gamma_plus, self.omega_tilde_plus, self.omega_r, self.lambda_plus)
        return Oscillator(self.gamma_minus, self.omega_tilde_minus, self.omega_r, self.lambda_minus)


def reduced_params(cfg: PairConfig):
    """Effective damping, frequency and coupling of the ``+-`` normal modes."""
    p, d = cfg.params, cfg.d
    g, wr2 = p.gamma, p.omega_r**2
    gd = g * d
    if gd >= 1.0:
        raise ValueError("gamma * d >= 1: short-distance reduction invalid")
    gm = g * d * d / 6.0 * (wr2 + 2 * g / d) / (1 + gd) ** 2
    gp = 2 * g / (1 - gd) - g * d * d / 6.0 * (wr2 - 2 * g / d) / (1 - gd) ** 2
    op2 = (wr2 - 2 * g / d) / (1 - gd)
    om2 = (wr2 + 2 * g / d) / (1 + gd)
    if op2 <= gp * gp or om2 <= gm * gm:
        raise ValueError("reduced normal modes are not underdamped")
    return ReducedParams(
        gamma_plus=gp,
        gamma_minus=gm,
        omega_plus=math.sqrt(op2),
        omega_minus=math.sqrt(om2),
        lambda_plus=p.lambda0 / (1 - gd),
        lambda_minus=p.lambda0 / (1 + gd),
        omega_r=p.omega_r,
    )


def reduced_detector_mode(t, osc: Oscillator, derivative=False):
    """``q_self +- q_cross`` for one normal mode; equals 1 at ``t = 0``."""
    t = np.asarray(t, dtype=float)
    e1 = np.exp((-osc.gamma + 1j * osc.omega) * t)
    e2 = np.exp((-osc.gamma - 1j * osc.omega) * t)
    if derivative:
        return osc.s1 * (-osc.gamma + 1j * osc.omega) * e1 + osc.s2 * (-osc.gamma - 1j * osc.omega) * e2
    return osc.s1 * e1 + osc.s2 * e2


def reduced_mode_solutions(t, omega, k1_phase, rp: ReducedParams):
    """Normal-mode solutions of the short-distance model.

    Parameters
    ----------
    t : float
        Time.
    omega : float
        Field frequency.
    k1_phase : complex
        ``exp(i k1 d / 2)``.
    rp : ReducedParams

    Returns
    -------
    tuple
        ``(q_plus_combo, q_minus_combo, q_detector_plus, q_detector_minus)``:
        the field-driven ``q_A +- q_B`` and the detector modes
        ``q_self +- q_cross``.
    """
    out = []
    for sign in (1, -1):
        osc = rp.oscillator(sign)
        phase = np.conj(k1_phase) + sign * k1_phase
        terms = mode_terms(0, osc, 1.0)
        out.append(phase * evaluate_mode_terms(terms, float(t), np.array([omega]), osc)[0])
    for sign in (1, -1):
        out.append(complex(reduced_detector_mode(t, rp.oscillator(sign))))
    return tuple(out)
