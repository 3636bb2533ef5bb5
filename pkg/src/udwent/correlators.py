"""Covariance matrix of the detector pair.

The state starts factorized, so every symmetrized correlator splits into

* an a-part, the initial detector data carried forward by the detector
  modes (a linear map ``T(t)`` acting on ``V(0)``), and
* a v-part, the field vacuum fluctuations fed through the field-driven
  modes and integrated over the field wavevector.

The angular part of the wavevector integral is done by hand: a phase
``exp(i k . r)`` averages to ``sin(w r) / (w r)``, so what remains is one
frequency integral per pair of mode terms.  Those are evaluated in closed
form by ``omega_integrals``; ``v_part_quadrature`` does the same integrals
by adaptive quadrature and serves as the independent check.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec

from . import special
from .gaussian import block_matrix
from .modes import (
    MAX_ORDER,
    Oscillator,
    evaluate_mode_terms,
    mode_terms,
    q_cross,
    q_self,
    reduced_detector_mode,
    reduced_params,
    site_sign,
)
from .omega_integrals import rational_integral
from .params import DetectorParams, InitialGaussianState, PairConfig

FIELDS = ("qq_self", "pp_self", "qp_self", "qq_cross", "pp_cross", "qp_cross")
# Order-n vacuum terms are sums of pieces of size (omega d)**(-2n) relative to
# the result; orders whose roundoff would exceed about 1e-9 are refused.
PRECISION_BUDGET = 1e7


@dataclass(frozen=True)
class CorrelatorSet:
    """The six independent entries of a symmetric pair covariance.

    ``qp_cross`` stands for ``<Q_A, P_B> = <P_A, Q_B>``.
    """

    qq_self: np.ndarray
    pp_self: np.ndarray
    qp_self: np.ndarray
    qq_cross: np.ndarray
    pp_cross: np.ndarray
    qp_cross: np.ndarray

    def matrix(self):
        return block_matrix(*(getattr(self, f) for f in FIELDS))

    def __add__(self, other):
        return CorrelatorSet(*(getattr(self, f) + getattr(other, f) for f in FIELDS))

    def scale(self, k):
        return CorrelatorSet(*(k * getattr(self, f) for f in FIELDS))

    def as_tuple(self):
        return tuple(getattr(self, f) for f in FIELDS)


# Initial data and a-part -------------------------------------------------------


def initial_covariance(state: InitialGaussianState, params: DetectorParams = None):
    """Second moments of the initial squeezed Gaussian state."""
    if not (state.alpha > 0 and state.beta > 0):
        raise ValueError("alpha and beta must be positive")
    h, a2, b2 = state.hbar, state.alpha**2, state.beta**2
    qq = (h * h / b2 + a2) / 4
    qq_x = (h * h / b2 - a2) / 4
    pp = (h * h / a2 + b2) / 4
    pp_x = (b2 - h * h / a2) / 4
    return block_matrix(qq, pp, 0.0, qq_x, pp_x, 0.0)


def transfer_from_modes(qs, qs_dot, qc, qc_dot, omega_r):
    """Linear map from ``(Q_A, P_A, Q_B, P_B)(0)`` to the same at time ``t``.

    A complex mode ``q`` with ``q(0) = 1`` and ``q'(0) = -i omega_r`` gives
    ``Re q`` as the response to initial position and ``-Im q / omega_r`` as
    the response to initial momentum.
    """
    qs, qs_dot, qc, qc_dot = np.broadcast_arrays(qs, qs_dot, qc, qc_dot)
    row_q = [qs.real, -qs.imag / omega_r, qc.real, -qc.imag / omega_r]
    row_p = [qs_dot.real, -qs_dot.imag / omega_r, qc_dot.real, -qc_dot.imag / omega_r]
    a = np.stack([np.stack(row_q[:2], -1), np.stack(row_p[:2], -1)], -2)
    c = np.stack([np.stack(row_q[2:], -1), np.stack(row_p[2:], -1)], -2)
    top = np.concatenate([a, c], -1)
    bottom = np.concatenate([c, a], -1)
    return np.concatenate([top, bottom], -2)


def transfer_matrix(t, cfg: PairConfig, order=MAX_ORDER):
    """Transfer matrix built from the series detector modes; identity at t = 0."""
    qs = q_self(t, cfg, order)
    qc = q_cross(t, cfg, order)
    qsd = q_self(t, cfg, order, derivative=True)
    qcd = q_cross(t, cfg, order, derivative=True)
    return transfer_from_modes(qs, qsd, qc, qcd, cfg.params.omega_r)


def a_part_covariance(t, cfg: PairConfig, state: InitialGaussianState, order=MAX_ORDER):
    """``T(t) V(0) T(t)^T``."""
    tm = transfer_matrix(t, cfg, order)
    v0 = initial_covariance(state, cfg.params)
    return tm @ v0 @ np.swapaxes(tm, -1, -2)


# v-part by closed-form frequency integrals ------------------------------------


def reliable_order(omega, d):
    """Highest mutual-influence order the closed-form v-part resolves at ``omega d``."""
    x = omega * d
    if x >= 1.0:
        return MAX_ORDER
    return min(MAX_ORDER, int(math.log(PRECISION_BUDGET) / (-2.0 * math.log(x))))


class VacuumCorrelators:
    """Field-vacuum contribution to the pair covariance.

    Parameters
    ----------
    osc : Oscillator
        Damping, frequency and coupling of the modes.
    d : float or None
        Separation; ``None`` skips the cross entries.
    order : int
        Highest order of mutual influence kept in each mode.
    w_max : float
        Sharp cutoff of the frequency integrals.
    hbar : float
    kappa : float
        Weight per order, ``2 gamma / (Omega d)``.
    """

    def __init__(self, osc, d, order, w_max, hbar=1.0, kappa=0.0):
        self.osc = osc
        self.d = d
        self.order = int(order)
        self.w_max = float(w_max)
        self.hbar = hbar
        self.kappa = kappa
        if d is not None and self.order > reliable_order(osc.omega, d):
            raise ArithmeticError(
                f"v-part order {self.order} at omega*d = {osc.omega * d:.3g} loses all precision to "
                f"cancellation; at most order {reliable_order(osc.omega, d)} is resolved"
            )
        p1, p2 = osc.poles
        self.poles = (p1, p2, p1.conjugate(), p2.conjugate())
        self.q_terms = [mode_terms(n, osc, kappa) for n in range(self.order + 1)]
        self.p_terms = [mode_terms(n, osc, kappa, derivative=True) for n in range(self.order + 1)]
        self._cache = {}

    def _term_values(self, term, t):
        tau = t - term.n * (self.d or 0.0)
        on = tau > 0 if term.n > 0 else tau >= 0
        tt = np.where(on, tau, 0.0)
        if term.oscillating:
            val = np.full(t.shape, term.scalar, dtype=complex)
            x = -tt
        else:
            val = term.scalar * term.wave(tt) * np.exp(-self.osc.gamma * tt)
            x = None
        return np.where(on, val, 0.0), x, on

    def _pair(self, xs, ys, t, sep):
        """Sum over mode terms of ``int w ang(w r) Re[x conj(y)] dw``."""
        out = np.zeros(t.shape)
        self._cache = {}
        xv = [[self._term_values(tm, t) for tm in lst] for lst in xs]
        yv = [[self._term_values(tm, t) for tm in lst] for lst in ys]
        for n, (xl, xvals) in enumerate(zip(xs, xv)):
            for m, (yl, yvals) in enumerate(zip(ys, yv)):
                r = sep(n, m)
                for tx, (vx, ox, onx) in zip(xl, xvals):
                    for ty, (vy, oy, ony) in zip(yl, yvals):
                        on = onx & ony
                        if not on.any():
                            continue
                        weight = (vx * np.conj(vy))[on]
                        x = np.zeros(on.sum())
                        if ox is not None:
                            x = x + ox[on]
                        if oy is not None:
                            x = x - oy[on]
                        mults = (tx.m1, tx.m2, ty.m1, ty.m2)
                        power = tx.power + ty.power
                        if r == 0:
                            j = self._integral(mults, power + 1, x)
                        else:
                            j = (self._integral(mults, power, x + r) - self._integral(mults, power, x - r)) / (2j * r)
                        out[on] += np.real(weight * j)
        return self.hbar / (4 * math.pi**2) * out

    def _integral(self, mults, power, x):
        # collapse repeated phases (common for homogeneous x homogeneous)
        ux, inv = np.unique(x, return_inverse=True)
        vals = rational_integral(self.poles, mults, power, ux, self.w_max, self._cache)
        return np.asarray(vals)[inv]

    def _self_sep(self, n, m):
        return 0.0 if (n - m) % 2 == 0 else self.d

    def _cross_sep(self, n, m):
        return self.d if (n - m) % 2 == 0 else 0.0

    def self_entries(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        q, p = self.q_terms, self.p_terms
        sep = self._self_sep
        return (self._pair(q, q, t, sep), self._pair(p, p, t, sep), self._pair(q, p, t, sep))

    def cross_entries(self, t):
        if self.d is None:
            raise ValueError("separation required for cross correlators")
        t = np.atleast_1d(np.asarray(t, dtype=float))
        q, p = self.q_terms, self.p_terms
        sep = self._cross_sep
        return (self._pair(q, q, t, sep), self._pair(p, p, t, sep), self._pair(q, p, t, sep))

    def correlators(self, t):
        return CorrelatorSet(*self.self_entries(t), *self.cross_entries(t))


def vacuum_engine(cfg: PairConfig, order):
    p = cfg.params
    return VacuumCorrelators(
        Oscillator.from_params(p), cfg.d, order, p.omega_max, p.hbar, cfg.coupling_ratio
    )


def v_part(t, cfg: PairConfig, order=0):
    """v-part correlators with mutual influences up to ``order``."""
    return vacuum_engine(cfg, order).correlators(t)


def v_self_zeroth(t, params: DetectorParams):
    """Single-detector vacuum correlators ``(qq, pp, qp)``; independent of ``d``."""
    eng = VacuumCorrelators(Oscillator.from_params(params), None, 0, params.omega_max, params.hbar)
    return eng.self_entries(t)


def v_cross_zeroth_engine(t, cfg: PairConfig):
    """Zeroth-order cross correlators from the closed-form frequency integrals."""
    return vacuum_engine(cfg, 0).cross_entries(t)


# Closed forms in the sine and cosine integrals --------------------------------


def v_cross_zeroth(t, cfg: PairConfig):
    """Zeroth-order cross correlators ``(qq, pp, qp)`` for an infinite cutoff.

    Built from ``script_s``/``script_c`` at arguments ``d``, ``d - t`` and
    ``d + t``.  The light-cone point ``t = d`` is a logarithmic singularity of
    the infinite-cutoff result and is rejected.
    """
    p = cfg.params
    d, g, om, h = cfg.d, p.gamma, p.omega, p.hbar
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.isclose(t, d, rtol=0, atol=1e-12 * d)):
        raise ValueError("t = d lies on the light cone; use the finite-cutoff engine")
    ss = special.script_s
    sc = special.script_c
    s_d = ss(np.array([d]), om, g)[0]
    s_sum = ss(d - t, om, g) + ss(d + t, om, g)
    c_dif = sc(d - t, om, g) - sc(d + t, om, g)
    st, ct = np.sin(om * t), np.cos(om * t)
    e1, e2 = np.exp(-g * t), np.exp(-2 * g * t)
    w = om + 1j * g
    pre = h / (math.pi * om * om * d)
    qq = pre * np.real(
        1j / w * ((om + e2 * (om + 2 * g * np.exp(1j * om * t) * st)) * s_d
                  - e1 * ((om * ct + g * st) * s_sum + w * st * c_dif))
    )
    pp = pre * np.real(
        1j * w * ((om + e2 * (om - 2 * g * np.exp(1j * om * t) * st)) * s_d
                  - e1 * ((om * ct - g * st) * s_sum + np.conj(w) * st * c_dif))
    )
    qp = pre * g * e1 * st * np.real(-2 * np.exp((-g + 1j * om) * t) * s_d + s_sum + 1j * c_dif)
    return qq, pp, qp


def late_zeroth(cfg: PairConfig):
    """Zeroth-order correlators for ``t >> 1/gamma`` (qp entries vanish).

    Returns ``(qq_self, pp_self, qq_cross, pp_cross)``.
    """
    p = cfg.params
    g, om, h = p.gamma, p.omega, p.hbar
    lg = np.log((g - 1j * om) / (g + 1j * om))
    qq = np.real(1j * h / (2 * math.pi * om) * lg)
    pp = np.real(h / math.pi * (1j / (2 * om) * (om * om - g * g) * lg
                                + g * (2 * p.lambda_cut_1 - np.log(1 + g * g / (om * om)))))
    s_d = special.script_s(cfg.d, om, g)
    qq_x = h / (math.pi * om * cfg.d) * np.real(1j * s_d / (om + 1j * g))
    pp_x = h / (math.pi * om * cfg.d) * np.real((1j * om - g) * s_d)
    return float(qq), float(pp), float(qq_x), float(pp_x)


def outside_lightcone_cross(t, cfg: PairConfig):
    """Leading large-``(d - t)`` form of the zeroth-order cross correlators."""
    p = cfg.params
    d, g, om, wr = cfg.d, p.gamma, p.omega, p.omega_r
    t = np.asarray(t, dtype=float)
    if np.any(d - t <= 5.0 / om):
        raise ValueError("requires d - t > 5 / Omega (far outside the light cone)")
    c = np.cos(om * t) + g / om * np.sin(om * t)
    e1, e2 = np.exp(-g * t), np.exp(-2 * g * t)
    ratio = d * d / (d * d - t * t)
    qq = 2 * g / (math.pi * wr**4 * d * d) * (1 + e2 * c * c - 2 * ratio * e1 * c)
    pp = 2 * g / (math.pi * d * d) * e2 * np.sin(om * t) ** 2 / om**2
    qp = 2 * g * e1 / (math.pi * wr**2 * d * d) * np.sin(om * t) / om * (-e1 * c + ratio)
    return p.hbar * qq, p.hbar * pp, p.hbar * qp


def first_order_cross(t, cfg: PairConfig):
    """Weak-coupling cross correlators ``(qq, pp)`` with first-order mutual influence."""
    p = cfg.params
    d, g, om, h = cfg.d, p.gamma, p.omega, p.hbar
    t = np.atleast_1d(np.asarray(t, dtype=float))
    qq0, pp0, _ = v_cross_zeroth(t, cfg)
    u = np.maximum(t - d, 0.0)
    corr = np.where(
        t > d,
        h / (2 * om) * np.sin(om * d) / (om * d) * math.exp(-g * d)
        * (-1 + np.exp(-2 * g * u) * (1 + 2 * g * u)),
        0.0,
    )
    return qq0 + corr, pp0 + om * om * corr


# Quadrature oracle --------------------------------------------------------------


def v_part_quadrature(t, cfg: PairConfig, order=0, w_max=None, rtol=1e-10, atol=1e-14):
    """The v-part by adaptive quadrature of the frequency integrand.

    The integrand is built numerically from the mode functions at each
    frequency.  Breakpoints every ``pi / (2 max(t, d))`` keep each initial
    panel within a quarter oscillation of the phases, and extra points
    bracket the resonance.
    """
    p = cfg.params
    w_max = p.omega_max if w_max is None else float(w_max)
    osc = Oscillator.from_params(p)
    kap = cfg.coupling_ratio
    t = float(t)
    qt = [mode_terms(n, osc, kap) for n in range(order + 1)]
    pt = [mode_terms(n, osc, kap, derivative=True) for n in range(order + 1)]
    d = cfg.d
    z_a, z_b = -0.5 * d, 0.5 * d

    def modes(w):
        qa = [evaluate_mode_terms(qt[n], t - n * d, w, osc) for n in range(order + 1)]
        pa = [evaluate_mode_terms(pt[n], t - n * d, w, osc) for n in range(order + 1)]
        return qa, pa

    def sinc(x):
        return np.sinc(x / math.pi)

    def integrand(w):
        w = np.atleast_1d(w)
        qa, pa = modes(w)
        acc = np.zeros((6,) + w.shape)
        for n in range(order + 1):
            for m in range(order + 1):
                sn, sm = site_sign(n), site_sign(m)
                # same detector A: sites sn z_a and sm z_a; B carries z_b
                ang_self = sinc(w * abs(sn - sm) * z_a)
                ang_cross = sinc(w * (sn * z_a - sm * z_b))
                acc[0] += ang_self * np.real(qa[n] * np.conj(qa[m]))
                acc[1] += ang_self * np.real(pa[n] * np.conj(pa[m]))
                acc[2] += ang_self * np.real(qa[n] * np.conj(pa[m]))
                acc[3] += ang_cross * np.real(qa[n] * np.conj(qa[m]))
                acc[4] += ang_cross * np.real(pa[n] * np.conj(pa[m]))
                acc[5] += ang_cross * np.real(qa[n] * np.conj(pa[m]))
        return acc * w * p.hbar / (4 * math.pi**2)

    width = math.pi / (2 * max(t, d, 1e-12))
    pts = list(np.arange(width, w_max, width))
    pts += [p.omega + k * p.gamma for k in (-20, -5, -1, 0, 1, 5, 20)]
    pts = sorted(x for x in set(pts) if 0 < x < w_max)
    total, _ = quad_vec(
        lambda x: integrand(np.array([x]))[:, 0], 0.0, w_max,
        epsrel=rtol, epsabs=atol, points=pts, limit=4 * len(pts) + 200,
    )
    return CorrelatorSet(*total)


# Full assembly -----------------------------------------------------------------


def covariance(t, cfg: PairConfig, state: InitialGaussianState, order=1, v_order=None):
    """Full ``V(t)`` (a-part plus v-part); shape ``(len(t), 4, 4)``.

    ``order`` sets the detector-mode truncation; ``v_order`` (default equal)
    the truncation of the field-driven modes.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    v_order = order if v_order is None else v_order
    va = a_part_covariance(t, cfg, state, order)
    vv = v_part(t, cfg, v_order).matrix()
    return va + vv


def short_distance_covariance(t, cfg: PairConfig, state: InitialGaussianState):
    """``V(t)`` from the two normal modes of a closely spaced pair.

    Each normal mode behaves as a single damped oscillator with its own
    damping and frequency; the zeroth-order self and cross correlators of
    that oscillator (coupling ``lambda_+-``) combine into the pair entries.
    """
    p = cfg.params
    rp = reduced_params(cfg)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    op, om_ = rp.oscillator(1), rp.oscillator(-1)
    qp_, qm_ = reduced_detector_mode(t, op), reduced_detector_mode(t, om_)
    dp_, dm_ = reduced_detector_mode(t, op, True), reduced_detector_mode(t, om_, True)
    tm = transfer_from_modes(
        0.5 * (qp_ + qm_), 0.5 * (dp_ + dm_), 0.5 * (qp_ - qm_), 0.5 * (dp_ - dm_), p.omega_r
    )
    v0 = initial_covariance(state, p)
    va = tm @ v0 @ np.swapaxes(tm, -1, -2)
    parts = []
    for sign, osc in ((1, op), (-1, om_)):
        eng = VacuumCorrelators(osc, cfg.d, 0, p.omega_max, p.hbar)
        s = eng.self_entries(t)
        c = eng.cross_entries(t)
        comb = [0.5 * (a + sign * b) for a, b in zip(s, c)]
        parts.append(comb)
    self_e = [a + b for a, b in zip(parts[0][:3], parts[1][:3])]
    cross_e = [a - b for a, b in zip(parts[0][:3], parts[1][:3])]
    vv = block_matrix(*self_e, *cross_e)
    return va + vv
