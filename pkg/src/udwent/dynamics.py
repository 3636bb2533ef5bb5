"""Entanglement dynamics of the detector pair in the time domain.

Trajectories of ``Sigma``, the logarithmic negativity and the uncertainty
function for several levels of approximation, first disentanglement times
with later revivals, and the weak-coupling closed forms used to interpret
them (outside the light cone, at early times, on the superradiant plateau
and for widely separated detectors).
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import gaussian
from .correlators import (
    a_part_covariance,
    covariance,
    outside_lightcone_cross,
    reliable_order,
    short_distance_covariance,
    v_part,
    v_self_zeroth,
)
from .gaussian import block_matrix
from .modes import MAX_ORDER
from .params import EULER, DetectorParams, InitialGaussianState, PairConfig

METHODS = ("zeroth", "first_order", "full_series", "short_distance", "outside_lightcone")
COLUMNS = ("t", "d", "sigma", "log_negativity", "uncertainty", "c_minus")


# Covariance for each approximation ---------------------------------------------


def covariance_by_method(t, cfg: PairConfig, state: InitialGaussianState, method="first_order", order=None):
    """``V(t)`` of shape ``(len(t), 4, 4)``.

    Parameters
    ----------
    method : str
        ``zeroth`` and ``first_order`` truncate the mutual influences at
        order 0 and 1; ``full_series`` keeps every order that has arrived by
        ``max(t)`` (exact there); ``short_distance`` uses the normal-mode
        reduction of a close pair; ``outside_lightcone`` the large-``d - t``
        asymptotics of the cross correlators.
    order : int, optional
        Overrides the truncation for ``zeroth``/``first_order``.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t < 0):
        raise ValueError("times must be nonnegative")
    if method == "zeroth":
        return covariance(t, cfg, state, order=0 if order is None else order)
    if method == "first_order":
        return covariance(t, cfg, state, order=1 if order is None else order)
    if method == "full_series":
        need = int(math.floor(t.max() / cfg.d)) if t.size else 0
        if need > MAX_ORDER:
            raise ValueError(
                f"full series up to t = {t.max():.4g} needs order {need} > {MAX_ORDER}; "
                "shorten the time range or use another method"
            )
        if need > reliable_order(cfg.params.omega, cfg.d):
            raise ArithmeticError(
                f"full series needs order {need} but only order {reliable_order(cfg.params.omega, cfg.d)} "
                f"is resolved at omega d = {cfg.params.omega * cfg.d:.3g}; use short_distance"
            )
        return covariance(t, cfg, state, order=need)
    if method == "short_distance":
        return short_distance_covariance(t, cfg, state)
    if method == "outside_lightcone":
        p = cfg.params
        va = a_part_covariance(t, cfg, state, 0)
        qq, pp, qp = v_self_zeroth(t, p)
        qqx, ppx, qpx = outside_lightcone_cross(t, cfg)
        return va + block_matrix(qq, pp, qp, qqx, ppx, qpx)
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")


def measures_of(v, hbar=1.0):
    """Vectorized ``(sigma, log_negativity, uncertainty, c_minus)``."""
    vpt = gaussian.partial_transpose(v)
    cm = np.asarray(gaussian.symplectic_spectrum(vpt).c_minus)
    with np.errstate(divide="ignore"):
        en = np.maximum(-np.log2(2 * cm / hbar), 0.0)
    return gaussian.sigma(v, hbar), en, gaussian.uncertainty(v, hbar), cm


# Trajectories ----------------------------------------------------------------


@dataclass
class TrajectoryTable:
    """Rows ``(t, d, sigma, log_negativity, uncertainty, c_minus)`` sorted by ``(d, t)``."""

    data: np.ndarray
    metadata: dict = field(default_factory=dict)

    def column(self, name):
        return self.data[:, COLUMNS.index(name)]

    def at_separation(self, d):
        rows = self.data[self.data[:, 1] == d]
        return TrajectoryTable(rows, dict(self.metadata))

    def __len__(self):
        return len(self.data)


def entanglement_trajectory(cfg, state, t_grid, order=None, method="first_order", d_values=None):
    """Entanglement measures along a time grid, for one or several separations.

    Parameters
    ----------
    cfg : PairConfig
    state : InitialGaussianState
    t_grid : array_like
        Strictly increasing, nonnegative times.
    order : int, optional
        Truncation order (``zeroth``/``first_order`` methods).
    method : str
        See ``covariance_by_method``.
    d_values : array_like, optional
        Separations to sweep; default is ``cfg.d`` alone.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("time grid must be a non-empty 1-d array")
    if np.any(np.diff(t) <= 0):
        raise ValueError("time grid must be strictly increasing")
    ds = [cfg.d] if d_values is None else sorted(float(x) for x in d_values)
    if not ds:
        raise ValueError("no separations given")
    blocks = []
    for d in ds:
        c = PairConfig(cfg.params, d)
        v = covariance_by_method(t, c, state, method, order)
        s, en, u, cm = measures_of(v, cfg.params.hbar)
        blocks.append(np.column_stack([t, np.full_like(t, d), s, en, u, cm]))
    meta = {"method": method, "order": order, "alpha": state.alpha, "beta": state.beta}
    return TrajectoryTable(np.vstack(blocks), meta)


def sigma_series(t, cfg, state, method="first_order", order=None):
    return gaussian.sigma(covariance_by_method(t, cfg, state, method, order), cfg.params.hbar)


# Disentanglement time ------------------------------------------------------------


@dataclass(frozen=True)
class DisentanglementResult:
    t_de: float
    revivals: tuple
    horizon: float


def _first_crossing(ts, s):
    """Index ``i`` of the first sample with ``s[i] >= 0`` after ``s[i-1] < 0``."""
    neg = s < 0
    idx = np.nonzero(~neg[1:] & neg[:-1])[0]
    return None if idx.size == 0 else int(idx[0] + 1)


def disentanglement_time(cfg, state, order=None, method="first_order", horizon=None,
                         revival_window=None, chunk=2048):
    """Earliest time at which ``Sigma`` climbs back to zero from below.

    The grid step is ``pi / (4 omega)`` so that sign changes within one
    intrinsic period are caught; the crossing is then refined by root
    bracketing.  Intervals of renewed entanglement within ``revival_window``
    after the first crossing are returned as ``revivals``.

    Raises
    ------
    ValueError
        The state is not entangled at ``t = 0``.
    ArithmeticError
        No crossing before ``horizon`` (default ``20 / gamma``).
    """
    p = cfg.params
    step = math.pi / (4 * p.omega)
    horizon = 20.0 / p.gamma if horizon is None else float(horizon)
    revival_window = 200 * 2 * math.pi / p.omega if revival_window is None else float(revival_window)

    def sig(t):
        return sigma_series(t, cfg, state, method, order)

    s0 = float(sig(np.array([0.0]))[0])
    if s0 >= 0:
        raise ValueError(f"state is not entangled at t = 0 (Sigma = {s0:.3g})")

    def refine(a, b):
        return brentq(lambda x: float(sig(np.array([x]))[0]), a, b, xtol=1e-10 * max(1.0, b), rtol=1e-12)

    t_start, last_t, last_s = 0.0, 0.0, s0
    t_de = None
    while t_start < horizon:
        ts = t_start + step * np.arange(1, chunk + 1)
        ts = ts[ts <= horizon + step]
        s = sig(ts)
        ts_all = np.concatenate([[last_t], ts])
        s_all = np.concatenate([[last_s], s])
        i = _first_crossing(ts_all, s_all)
        if i is not None:
            t_de = refine(ts_all[i - 1], ts_all[i]) if s_all[i] > 0 else float(ts_all[i])
            break
        t_start, last_t, last_s = ts[-1], ts[-1], s[-1]
    if t_de is None:
        raise ArithmeticError(f"no disentanglement before the horizon t = {horizon:.4g}")

    # revivals after the first crossing
    ts = t_de + step * np.arange(1, int(revival_window / step) + 2)
    s = sig(ts)
    revivals = []
    neg = s < 0
    k = 0
    while k < len(ts):
        if neg[k]:
            j = k
            while j + 1 < len(ts) and neg[j + 1]:
                j += 1
            lo = refine(ts[k - 1], ts[k]) if k > 0 else float(ts[k])
            hi = refine(ts[j], ts[j + 1]) if j + 1 < len(ts) else float(ts[j])
            revivals.append((lo, hi))
            k = j + 1
        else:
            k += 1
    return DisentanglementResult(float(t_de), tuple(revivals), horizon)


def entanglement_onset(cfg, state, t_max, method="first_order", order=None, n=2000, tol=1e-12):
    """First time ``Sigma`` drops below ``-tol`` (entanglement creation), or ``None``."""
    ts = np.linspace(0.0, t_max, n + 1)[1:]
    s = sigma_series(ts, cfg, state, method, order)
    idx = np.nonzero(s < -tol)[0]
    if idx.size == 0:
        return None
    i = int(idx[0])
    if i == 0:
        return float(ts[0])
    return brentq(lambda x: float(sigma_series(np.array([x]), cfg, state, method, order)[0]) + tol,
                  ts[i - 1], ts[i], xtol=1e-12)


# Outside the light cone -----------------------------------------------------------


@dataclass(frozen=True)
class EnRel:
    direct: float
    closed_form: float
    a0: float
    a1: float
    a2: float
    b: float


def en_rel_coefficients(t, d, state: InitialGaussianState, params: DetectorParams):
    """``(a0, a1, a2, b)`` of the weak-coupling relative negativity outside the light cone."""
    h, a2_, b2, om, g = state.hbar, state.alpha**2, state.beta**2, params.omega, params.gamma
    x = abs(state.chi)
    e1, e2, e4 = math.exp(-g * t), math.exp(-2 * g * t), math.exp(-4 * g * t)
    base = h * h + a2_ * (b2 - 2 * h * om) - x
    a0 = (h * h * b2 + a2_ * (-a2_ * b2 * om * om + b2 * b2 + 4 * b2 * h * om - h * h * om * om)
          + x * (a2_ * om * om - b2) + 2 * b2 * e2 * base) * e2 / d**2
    a1 = -4 * b2 * (2 * a2_ * h * om + base * e2) * e1 / (d * d - t * t)
    a2 = (4 * h * om * a2_ * b2 + (b2 * h * h + a2_ * (a2_ * b2 * om * om + b2 * b2 - 4 * b2 * h * om + h * h * om * om)
                                   - x * (a2_ * om * om + b2)) * e2) / d**2
    b = om**3 * (2 * h * h * om * a2_ * b2
                 + h * (a2_ * (a2_ * b2 * om * om + b2 * b2 - 4 * b2 * h * om) + (a2_ * om * om + b2) * (h * h - x)) * e2
                 + (h - a2_ * om) * (h * om - b2) * (a2_ * b2 + h * h - x) * e4)
    return a0, a1, a2, b


def _c_minus_pt(v, hbar):
    return float(gaussian.symplectic_spectrum(gaussian.partial_transpose(v)).c_minus)


def en_rel(t, d, cfg: PairConfig, state: InitialGaussianState):
    """Relative negativity ``-log2 2c_-(t, d) + log2 2c_-(t, inf)`` outside the light cone.

    ``direct`` differences two zeroth-order covariance assemblies (exact
    for ``t < d``); ``closed_form`` is the weak-coupling expansion built from
    ``en_rel_coefficients``.

    Raises
    ------
    ValueError
        For a separable initial state (``chi = 0``), where the expansion does
        not apply, or when ``t >= d``.
    """
    if t >= d:
        raise ValueError("en_rel needs t < d (outside the light cone)")
    if abs(state.chi) < 1e-10:
        raise ValueError("chi = 0: the state is separable; use the separable-state Sigma instead")
    p = cfg.params
    h = p.hbar
    c = PairConfig(p, d)
    tt = np.array([float(t)])
    v_d = covariance(tt, c, state, order=0)[0]
    # d -> infinity: no vacuum cross correlations, no mutual influence
    va = a_part_covariance(tt, c, state, 0)[0]
    qq, pp, qp = v_self_zeroth(tt, p)
    v_inf = va + block_matrix(qq[0], pp[0], qp[0], 0.0, 0.0, 0.0)
    direct = -math.log2(2 * _c_minus_pt(v_d, h) / h) + math.log2(2 * _c_minus_pt(v_inf, h) / h)
    a0, a1, a2, b = en_rel_coefficients(t, d, state, p)
    om = p.omega
    closed = (p.gamma * h / (math.pi * math.log(2)) * math.copysign(1.0, state.chi)
              * (a0 + a1 * math.cos(om * t) + a2 * math.cos(2 * om * t)) / b)
    return EnRel(direct, closed, a0, a1, a2, b)


def relative_negativity(t, cfg: PairConfig, state: InitialGaussianState, method="first_order", order=None):
    """``-log2 2c_-(t, d) + log2 2c_-(t, inf)`` along a time grid, for any state.

    Unlike ``en_rel`` this is the direct difference only, valid inside the
    light cone too and for separable states; the reference pair at infinite
    separation has no cross correlations and no mutual influence.
    """
    p = cfg.params
    h = p.hbar
    t = np.atleast_1d(np.asarray(t, dtype=float))
    v_d = covariance_by_method(t, cfg, state, method, order)
    va = a_part_covariance(t, cfg, state, 0)
    qq, pp, qp = v_self_zeroth(t, p)
    v_inf = va + block_matrix(qq, pp, qp, 0.0, 0.0, 0.0)
    cm_d = gaussian.symplectic_spectrum(gaussian.partial_transpose(v_d)).c_minus
    cm_inf = gaussian.symplectic_spectrum(gaussian.partial_transpose(v_inf)).c_minus
    return np.log2(cm_inf / cm_d)


# Early times and entanglement creation ----------------------------------------------


@dataclass(frozen=True)
class EarlyTimeCoefficients:
    sigma0: float
    s1_0: float
    s2_0: float
    s1_1: float
    s2_1: float

    def value(self, t, d):
        t = np.asarray(t, dtype=float)
        u = np.maximum(t - d, 0.0)
        return self.sigma0 + self.s1_0 * t + self.s2_0 * t * t + self.s1_1 * u + self.s2_1 * u * u


def early_time_coefficients(cfg: PairConfig, state: InitialGaussianState):
    """Near-separable closed forms of the early-time polynomial for ``Sigma``.

    Valid for ``beta**2`` close to ``hbar**2 / alpha**2``; oscillating terms
    are dropped, so the model tracks the running mean of ``Sigma``.
    """
    p, d = cfg.params, cfg.d
    h, a2, om, g = state.hbar, state.alpha**2, p.omega, p.gamma
    l0, l1 = p.lambda_cut_0, p.lambda_cut_1
    sigma0 = h * h / (4 * math.pi**2 * a2 * a2 * om**4) * (h * h * g * l1 + a2 * a2 * om * om * g * (2 * l0 + l1)) ** 2
    s2_0 = g * g * h * h * (h - a2 * om) ** 4 / (4 * om * om * a2 * a2)
    s2_1 = -g * g * h * h * (h * h - a2 * a2 * om * om) ** 2 / (4 * om**4 * a2 * a2 * d * d)
    s1_0 = (g * h * h / (2 * math.pi * om**3) * (2 * om * om * g * l0 + (h * h / (a2 * a2) + om * om) * g * l1)
            * (h - a2 * om) ** 2)
    return EarlyTimeCoefficients(sigma0, s1_0, s2_0, 0.0, s2_1)


def _early_window(cfg):
    p = cfg.params
    lo = math.exp(-EULER - p.lambda_cut_0 / 2) / p.omega
    hi = 0.1 / (p.gamma * max(p.lambda_cut_0, p.lambda_cut_1, 1.0))
    return lo, hi


def early_time_sigma(t, cfg: PairConfig, state: InitialGaussianState):
    """Early-time polynomial model of ``Sigma`` and its coefficients.

    Raises
    ------
    ValueError
        ``t`` outside ``(exp(-gamma_e - Lambda_0/2)/omega, 0.1/(gamma Lambda))``.
    """
    lo, hi = _early_window(cfg)
    t = np.asarray(t, dtype=float)
    if np.any(t <= lo) or np.any(t >= hi):
        raise ValueError(f"early-time model valid only for {lo:.3g} < t < {hi:.3g}")
    co = early_time_coefficients(cfg, state)
    return co.value(t, cfg.d), co


def _merged(co, d):
    """Coefficients of the single polynomial that ``co`` equals for ``t > d``."""
    return (co.sigma0 + co.s2_1 * d * d, co.s1_0 + co.s1_1 - 2 * co.s2_1 * d, co.s2_0 + co.s2_1)


def fit_early_time_coefficients(cfg, state, t_max=None, n=400, method="first_order"):
    """Least-squares fit of the early-time polynomial to a computed trajectory.

    Works for any initial state.  When fewer than a fifth of the samples lie
    on one side of the arrival time ``d`` the two pieces cannot be told
    apart; a single quadratic is fitted and returned in the ``_0`` fields
    with ``s1_1 = s2_1 = 0``.  For nearly separable states the fitted
    quadratic coefficients are compared with the closed forms and a warning
    is issued when they differ by more than 10%.
    """
    lo, hi = _early_window(cfg)
    d = cfg.d
    t_max = min(hi, max(4 * d, 40 * math.pi / cfg.params.omega)) if t_max is None else float(t_max)
    t = np.linspace(max(lo * 10, t_max / n), t_max, n)
    s = sigma_series(t, cfg, state, method)
    before = np.count_nonzero(t < d)
    split = min(before, n - before) >= 0.2 * n
    u = np.maximum(t - d, 0.0)
    cols = [np.ones_like(t), t, t * t] + ([u, u * u] if split else [])
    coef, *_ = np.linalg.lstsq(np.column_stack(cols), s, rcond=None)
    coef = list(map(float, coef)) + ([] if split else [0.0, 0.0])
    fit = EarlyTimeCoefficients(*coef)
    if abs(state.chi) < 1e-6:
        ref = early_time_coefficients(cfg, state)
        if split:
            pairs = [("s2_0", ref.s2_0, fit.s2_0), ("s2_1", ref.s2_1, fit.s2_1)]
        else:
            pairs = [("s2_0 + s2_1", _merged(ref, d)[2], fit.s2_0)] if d < t[n // 2] else [("s2_0", ref.s2_0, fit.s2_0)]
        for name, r, f in pairs:
            if r != 0 and abs(f - r) > 0.1 * abs(r):
                warnings.warn(f"fitted {name} = {f:.4g} differs from closed form {r:.4g} by >10%",
                              RuntimeWarning, stacklevel=2)
    return fit


@dataclass(frozen=True)
class EntanglementCreation:
    d1: float
    t_ent: float
    uncertainty_window: float


def entanglement_creation(cfg: PairConfig, state: InitialGaussianState):
    """Largest separation for transient entanglement creation and the creation time.

    ``t_ent`` is ``None`` when ``d >= d1``.  The estimate ignores oscillating
    terms and may be off by up to one intrinsic period ``2 pi / omega``
    (``uncertainty_window``).
    """
    p, d = cfg.params, cfg.d
    h, a2, om = state.hbar, state.alpha**2, p.omega
    if abs(h - a2 * om) <= 1e-12 * h:
        d1 = math.inf
    else:
        d1 = abs((h + a2 * om) / (h - a2 * om)) / om
    window = 2 * math.pi / om
    if d >= d1:
        return EntanglementCreation(d1, None, window)
    co = early_time_coefficients(cfg, state)
    s2 = abs(co.s2_0 + co.s2_1)
    lin = co.s1_0 - 2 * co.s2_1 * d
    disc = lin * lin + 4 * s2 * (co.sigma0 + co.s2_1 * d * d)
    t_ent = (lin + math.sqrt(max(disc, 0.0))) / (2 * s2)
    return EntanglementCreation(d1, t_ent, window)


# Superradiant plateau ---------------------------------------------------------------


def transient_sigma(cfg: PairConfig, state: InitialGaussianState, check_regime=True):
    """``Sigma`` on the plateau ``t ~ 1 / gamma_+`` of a close pair (depends on alpha only).

    Raises
    ------
    ValueError
        Outside ``gamma << d omega**2 << omega`` (checked with a factor 5).
    """
    p, d = cfg.params, cfg.d
    h, a2, om, g = state.hbar, state.alpha**2, p.omega, p.gamma
    x = d * om * om
    if check_regime and not (5 * g < x and 5 * x < om):
        raise ValueError("plateau formula needs gamma << d omega^2 << omega")
    s = math.sin(om * d) / (om * d) * math.exp(-2 * g * d)
    return h**4 / 64 * (s + 1 - 2 * a2 * om / h) * (s + 1 - 2 * h / (a2 * om) + 8 * p.lambda_cut_1 * g / (math.pi * om))


# Widely separated detectors -----------------------------------------------------------


@dataclass(frozen=True)
class WeakCouplingZParams:
    """State-dependent constants of the large-distance weak-coupling ``Sigma``."""

    z2: float
    z4: float
    z8: float
    alpha: float
    beta: float
    omega: float
    hbar: float = 1.0

    def __post_init__(self):
        tol = 1e-9 * max(abs(self.z8), abs(self.z4), abs(self.z2), 1e-300)
        if self.z8 < -tol or self.z8 - self.z4 < -tol or self.z2 < -tol:
            raise ValueError("need z8 >= 0, z8 - z4 >= 0 and z2 >= 0")

    @property
    def z6(self):
        a2, b2 = self.alpha**2, self.beta**2
        return (self.hbar**2 - a2 * b2) * (a2 * self.omega**2 - b2)


def sigma0_weak(t, state: InitialGaussianState, params: DetectorParams, z: WeakCouplingZParams):
    """Weak-coupling ``Sigma(t)`` of detectors too far apart to interact."""
    h, a2b2, om, g, l1 = state.hbar, (state.alpha * state.beta) ** 2, params.omega, params.gamma, params.lambda_cut_1
    t = np.asarray(t, dtype=float)
    e2, e4 = np.exp(-2 * g * t), np.exp(-4 * g * t)
    return (h * h * e4 / (16 * a2b2 * om * om) * (z.z8 * (e4 - 2 * e2) + z.z4)
            + h**3 * g * l1 / (4 * math.pi * a2b2 * om * om) * z.z2 * e2
            + h**4 * g * g * l1 * l1 / (math.pi**2 * om * om))


def t_de_estimates(state: InitialGaussianState, params: DetectorParams, z: WeakCouplingZParams, d=None):
    """Analytic disentanglement times ``(t_plus, t_minus, t_corrected)``.

    ``t_plus`` applies for ``z4 > 0``, ``t_minus`` for ``z4 < 0``; the
    inapplicable one is ``None``.  ``t_corrected`` adds the first-order
    interference in ``d`` to ``t_plus`` (``None`` without ``d`` or for
    ``z4 <= 0``).

    Raises
    ------
    ValueError
        ``z4 / z8 > 1`` (no real crossing).
    """
    g, h, l1, om = params.gamma, state.hbar, params.lambda_cut_1, params.omega
    t_plus = t_minus = t_corr = None
    if z.z4 > 0:
        if z.z8 <= 0 or z.z4 / z.z8 > 1:
            raise ValueError("z4 / z8 > 1: the estimate has no real crossing")
        t_plus = -math.log(1 - math.sqrt(1 - z.z4 / z.z8)) / (2 * g)
        if d is not None:
            z6 = z.z6
            u = t_plus - d
            grow = math.exp(g * d) * math.sin(om * d)
            den = z.z8 * d * (1 - math.exp(-2 * g * t_plus)) + z6 * (1 - 2 * g * u) * grow
            t_corr = t_plus - z6 * u * grow / den
    elif z.z4 < 0:
        a2b2 = (state.alpha * state.beta) ** 2
        num = abs(z.z4) * math.pi / (2 * h * g * l1)
        t_minus = math.log(num / (z.z2 + math.sqrt(z.z2**2 - 4 * a2b2 * z.z4))) / (2 * g)
    return t_plus, t_minus, t_corr


def fit_z_params(params: DetectorParams, state: InitialGaussianState, t_max=None, n=600):
    """Fit ``(z2, z4, z8)`` to the computed ``Sigma(t)`` of non-interacting detectors.

    ``sigma0_weak`` is linear in the three constants, so ordinary linear
    least squares over ``t in [0, t_max]`` (default ``3 / gamma``) suffices.
    """
    g, om, h, l1 = params.gamma, params.omega, state.hbar, params.lambda_cut_1
    t_max = 3.0 / g if t_max is None else float(t_max)
    t = np.linspace(0.0, t_max, n)
    cfg = PairConfig(params, 1e300)
    va = a_part_covariance(t, cfg, state, 0)
    qq, pp, qp = v_self_zeroth(t, params)
    v = va + block_matrix(qq, pp, qp, 0.0, 0.0, 0.0)
    s = gaussian.sigma(v, h)
    a2b2 = (state.alpha * state.beta) ** 2
    e2, e4 = np.exp(-2 * g * t), np.exp(-4 * g * t)
    c8 = h * h * e4 / (16 * a2b2 * om * om) * (e4 - 2 * e2)
    c4 = h * h * e4 / (16 * a2b2 * om * om)
    c2 = h**3 * g * l1 / (4 * math.pi * a2b2 * om * om) * e2
    rhs = s - h**4 * g * g * l1 * l1 / (math.pi**2 * om * om)
    (z2, z4, z8), *_ = np.linalg.lstsq(np.column_stack([c2, c4, c8]), rhs, rcond=None)
    z2 = max(float(z2), 0.0)
    return WeakCouplingZParams(z2, float(z4), float(z8), state.alpha, state.beta, om, h)
