"""Stability of the retarded mutual influence and the pair length scales.

The detector modes ``q_+-`` obey a delay equation whose late-time behaviour
is set by the roots of

    F(K) = -K**2 + 2 i gamma K + omega_r**2 -+ (2 gamma / d) exp(-i K d),

a mode ``exp(i K t)`` growing iff ``Im K < 0``.  Roots inside a rectangle
are located by the argument principle on recursively subdivided cells and
polished by Newton's method.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .params import EULER, DetectorParams

ROOT_RESIDUAL = 1e-9
IMAG_TOL = 1e-9
MARGINAL_RTOL = 1e-12
MAX_DEPTH = 40
# uneven split so that cell edges avoid the imaginary axis and symmetric points
SPLIT = 0.4871


@dataclass(frozen=True)
class CharacteristicRoot:
    k: complex
    kind: str
    residual: float


@dataclass(frozen=True)
class StabilityReport:
    classification: str
    roots: list = field(default_factory=list)
    d_ins: float = 0.0
    d_min: float = 0.0


def d_ins(params: DetectorParams):
    """Radius of instability ``2 gamma / omega_r**2``."""
    return 2 * params.gamma / params.omega_r**2


def d_min(params: DetectorParams):
    """Merge distance ``exp(1 - gamma_e - Lambda_1) / omega``."""
    return math.exp(1 - EULER - params.lambda_cut_1) / params.omega


def _sign(sign):
    if sign in ("+", 1):
        return 1
    if sign in ("-", -1):
        return -1
    raise ValueError("sign must be '+' or '-'")


def characteristic_function(k, params: DetectorParams, d, sign="+"):
    """``F(K)`` and ``F'(K)``."""
    s = _sign(sign)
    g = params.gamma
    k = np.asarray(k, dtype=complex)
    e = np.exp(-1j * k * d)
    f = -k * k + 2j * g * k + params.omega_r**2 - s * (2 * g / d) * e
    fp = -2 * k + 2j * g + s * 2j * g * e
    return f, fp


class RootCountError(ArithmeticError):
    pass


def _edge_phase(f, a, b, n0=64, max_pass=24):
    """Total change of ``arg f`` along the segment ``a -> b``."""
    s = np.linspace(0.0, 1.0, n0)
    vals = f(a + (b - a) * s)
    for _ in range(max_pass):
        dphi = np.angle(vals[1:] / vals[:-1])
        bad = np.abs(dphi) > 0.4
        if not bad.any():
            return float(np.sum(dphi)), float(np.min(np.abs(vals)))
        mids = 0.5 * (s[:-1] + s[1:])[bad]
        s = np.sort(np.concatenate([s, mids]))
        vals = f(a + (b - a) * s)
    raise RootCountError(f"phase along edge {a} -> {b} could not be resolved")


def _winding(f, x0, x1, y0, y1):
    corners = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
    total, fmin = 0.0, np.inf
    for a, b in zip(corners, corners[1:] + corners[:1]):
        ph, m = _edge_phase(f, a, b)
        total += ph
        fmin = min(fmin, m)
    n = total / (2 * math.pi)
    if abs(n - round(n)) > 1e-3:
        raise RootCountError(f"non-integer winding {n:.4f} on cell [{x0}, {x1}] x [{y0}, {y1}]")
    return int(round(n)), fmin


def _newton(fn, k0, lo, hi, tol=1e-15, max_iter=100):
    k = complex(k0)
    for _ in range(max_iter):
        f, fp = fn(k)
        if fp == 0:
            return None
        step = f / fp
        k = k - step
        if not (lo.real - 1 <= k.real <= hi.real + 1 and lo.imag - 1 <= k.imag <= hi.imag + 1):
            return None
        if abs(step) <= tol * max(1.0, abs(k)):
            break
    return k


def characteristic_roots(params: DetectorParams, d, sign="+", search_box=None):
    """All roots of the characteristic function inside a rectangle.

    Parameters
    ----------
    params : DetectorParams
    d : float
        Separation, positive.
    sign : {'+', '-'}
        ``'+'`` for the symmetric combination (``- 2 gamma/d`` term).
    search_box : (x_max, y_min, y_max), optional
        Rectangle ``|Re K| <= x_max``, ``y_min <= Im K <= y_max``.

    Returns
    -------
    list of CharacteristicRoot
        Sorted by imaginary part, then real part.

    Raises
    ------
    RootCountError
        A cell still holds several roots after the maximum subdivision, or
        Newton's method fails to produce the counted root.
    """
    if d <= 0:
        raise ValueError("separation must be positive")
    if search_box is None:
        search_box = default_box(params, d)
    x_max, y0, y1 = map(float, search_box)
    if not (x_max > 0 and y1 > y0):
        raise ValueError("empty search box")

    def f(k):
        return characteristic_function(k, params, d, sign)[0]

    def fn(k):
        v, dv = characteristic_function(k, params, d, sign)
        return complex(v), complex(dv)

    # nudge the box if a root sits on its boundary
    box = [-x_max, x_max, y0, y1]
    for _ in range(5):
        try:
            total, fmin = _winding(f, *box)
            if fmin > 1e-10:
                break
        except RootCountError:
            pass
        box = [box[0] * 1.0013, box[1] * 1.0017, box[2] - 1e-3 * (1 + abs(box[2])), box[3] + 1e-3 * (1 + abs(box[3]))]
    else:
        raise RootCountError("could not place the box boundary away from roots")

    roots = []
    stack = [(tuple(box), total, 0)]
    while stack:
        (x0, x1, yy0, yy1), n, depth = stack.pop()
        if n == 0:
            continue
        lo, hi = complex(x0, yy0), complex(x1, yy1)
        if n == 1:
            k = None
            for start in (0.5 * (lo + hi), lo + 0.25 * (hi - lo), lo + 0.75 * (hi - lo)):
                k = _newton(fn, start, lo, hi)
                if k is not None and x0 <= k.real <= x1 and yy0 <= k.imag <= yy1:
                    break
                k = None
            if k is not None:
                roots.append(k)
                continue
        if depth >= MAX_DEPTH:
            raise RootCountError(
                f"{n} roots unresolved in cell [{x0:.6g}, {x1:.6g}] x [{yy0:.6g}, {yy1:.6g}]"
            )
        # split the longer side
        if (x1 - x0) >= (yy1 - yy0):
            xm = x0 + SPLIT * (x1 - x0)
            cells = [(x0, xm, yy0, yy1), (xm, x1, yy0, yy1)]
        else:
            ym = yy0 + SPLIT * (yy1 - yy0)
            cells = [(x0, x1, yy0, ym), (x0, x1, ym, yy1)]
        counts = []
        for c in cells:
            cnt, _ = _winding(f, *c)
            counts.append(cnt)
        if sum(counts) != n:
            raise RootCountError(f"winding counts {counts} do not add up to {n} in cell {(x0, x1, yy0, yy1)}")
        for c, cnt in zip(cells, counts):
            stack.append((c, cnt, depth + 1))

    out = []
    for k in roots:
        if abs(k.real) < 1e-7:
            k = _polish_imaginary(params, d, sign, k.imag)
        res = abs(fn(k)[0])
        if res > ROOT_RESIDUAL:
            raise RootCountError(f"root {k} has residual {res:.3g}")
        kind = "purely_imaginary" if abs(k.real) < IMAG_TOL else "complex_pair"
        out.append(CharacteristicRoot(k, kind, res))
    if len(out) != total:
        raise RootCountError(f"found {len(out)} roots but the winding number is {total}")
    return sorted(out, key=lambda r: (r.k.imag, r.k.real))


def _polish_imaginary(params, d, sign, y):
    """Newton on the real function ``F(i y)``."""
    s = _sign(sign)
    g, wr2 = params.gamma, params.omega_r**2
    for _ in range(60):
        e = (2 * g / d) * math.exp(y * d)
        f = y * y - 2 * g * y + wr2 - s * e
        fp = 2 * y - 2 * g - s * d * e
        if fp == 0:
            break
        step = f / fp
        y -= step
        if abs(step) <= 1e-16 * max(1.0, abs(y)):
            break
    return complex(0.0, y)


def default_box(params: DetectorParams, d):
    """A rectangle holding the slowest modes (and any growing one)."""
    g, wr = params.gamma, params.omega_r
    x_max = 2 * wr + 2 * math.pi / d
    y_min = -(2 * g + math.sqrt(2 * g / d) + 1.0)
    y_max = 2 * g + 2.0 / d
    return x_max, y_min, y_max


def classify_stability(params: DetectorParams, d, check_roots=True):
    """Classify the pair and cross-check against the characteristic roots.

    Stable iff ``omega_r**2 > 2 gamma / d``; at equality ``K = 0`` is a root
    and the symmetric mode tends to a constant.
    """
    if d <= 0:
        raise ValueError("separation must be positive")
    lhs, rhs = params.omega_r**2, 2 * params.gamma / d
    if abs(lhs - rhs) <= MARGINAL_RTOL * rhs:
        cls = "marginal"
    elif lhs > rhs:
        cls = "stable"
    else:
        cls = "unstable"
    roots = []
    if check_roots and cls != "marginal":
        roots = characteristic_roots(params, d, "+") + characteristic_roots(params, d, "-")
        growing = [r for r in roots if r.k.imag < 0]
        if (cls == "unstable") != bool(growing):
            raise ArithmeticError(f"root positions contradict the {cls} classification")
    return StabilityReport(cls, roots, d_ins(params), d_min(params))


def late_time_qplus_coefficient(params: DetectorParams, d, omega, k1):
    """Amplitude of the surviving ``exp(-i omega t)`` mode of detector B.

    Resums the mutual influences to all orders; ``k1`` is the wavevector
    component along the pair axis.
    """
    g = params.gamma
    eps = 2 * g / d
    dd = params.omega_r**2 - omega * omega - 2j * g * omega
    num = params.lambda0 * (dd * np.exp(0.5j * k1 * d) + eps * np.exp(1j * omega * d - 0.5j * k1 * d))
    den = dd * dd - eps * eps * np.exp(2j * omega * d)
    if np.any(np.abs(den) == 0):
        raise ZeroDivisionError("driving frequency sits on a characteristic root")
    return num / den
