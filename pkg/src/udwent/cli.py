"""Command-line front end.

Subcommands
-----------
trajectory  Sigma, E_N, Upsilon and c_- on a (d, t) grid, written as CSV.
scales      Length and time scales of a configuration as one JSON object.
roots       Characteristic roots of both branches as CSV.
figure      Canned data sets behind the figures (fig1 ... fig8).
selftest    A handful of fast internal consistency checks.

Configuration is a single JSON document, e.g.::

    {"pair": {"gamma": 1e-5, "omega": 2.3, "lambda_cut_0": 20,
              "lambda_cut_1": 20, "d": 1.0},
     "state": {"alpha": 1.1, "beta": 4.5},
     "grid": {"t_min": 0, "t_max": 100, "t_steps": 101,
              "d_values": [0.5, 1.0, 2.0]},
     "method": "zeroth"}

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

import argparse
import copy
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .dynamics import METHODS, COLUMNS, covariance_by_method, measures_of, relative_negativity
from .params import DetectorParams, InitialGaussianState, PairConfig

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
# rows are computed in fixed chunks so the worker count never changes the arithmetic
CHUNK = 256


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    gamma: float
    omega: float
    d: float = 1.0
    hbar: float = 1.0
    lambda_cut_0: float = 20.0
    lambda_cut_1: float = 20.0
    alpha: float = 1.0
    beta: float = 1.0
    t_min: float = 0.0
    t_max: float = 10.0
    t_steps: int = 101
    t_spacing: str = "linear"
    d_values: list = field(default_factory=list)
    method: str = "first_order"
    order: int = None
    workers: int = 1
    search_box: list = None

    @property
    def params(self):
        return DetectorParams.from_omega(
            self.gamma, self.omega, hbar=self.hbar,
            lambda_cut_0=self.lambda_cut_0, lambda_cut_1=self.lambda_cut_1,
        )

    @property
    def pair(self):
        return PairConfig(self.params, self.d)

    @property
    def state(self):
        return InitialGaussianState(self.alpha, self.beta, self.hbar)

    def t_grid(self):
        if self.t_spacing == "log":
            return np.geomspace(self.t_min, self.t_max, self.t_steps)
        return np.linspace(self.t_min, self.t_max, self.t_steps)

    def to_dict(self):
        """Nested form accepted by ``parse_config``.

        The worker count is left out: it never changes the output.
        """
        return {
            "pair": {"gamma": self.gamma, "omega": self.omega, "d": self.d, "hbar": self.hbar,
                     "lambda_cut_0": self.lambda_cut_0, "lambda_cut_1": self.lambda_cut_1},
            "state": {"alpha": self.alpha, "beta": self.beta},
            "grid": {"t_min": self.t_min, "t_max": self.t_max, "t_steps": self.t_steps,
                     "t_spacing": self.t_spacing, "d_values": list(self.d_values)},
            "method": self.method,
            "order": self.order,
            "search_box": self.search_box,
        }


_SECTIONS = {
    "pair": ("gamma", "omega", "d", "hbar", "lambda_cut_0", "lambda_cut_1"),
    "state": ("alpha", "beta"),
    "grid": ("t_min", "t_max", "t_steps", "t_spacing", "d_values", "d_min", "d_max", "d_steps", "d_spacing"),
}
_TOP = ("method", "order", "workers", "search_box")


def _positive(name, v):
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v) or v <= 0:
        raise ConfigError(f"field '{name}': must be a positive number, got {v!r}")
    return float(v)


def parse_config(doc):
    """Validate a nested configuration dict and build a ``RunConfig``."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    for key in doc:
        if key not in _SECTIONS and key not in _TOP:
            raise ConfigError(f"unknown field '{key}'")
    flat = {}
    for sec, keys in _SECTIONS.items():
        part = doc.get(sec, {})
        if not isinstance(part, dict):
            raise ConfigError(f"field '{sec}': must be an object")
        for k, v in part.items():
            if k not in keys:
                raise ConfigError(f"unknown field '{sec}.{k}'")
            flat[k] = v
    for k in _TOP:
        if k in doc:
            flat[k] = doc[k]
    if "pair" not in doc or "gamma" not in flat or "omega" not in flat:
        raise ConfigError("field 'pair': 'gamma' and 'omega' are required")

    out = {}
    for name in ("gamma", "omega", "hbar", "alpha", "beta"):
        if name in flat:
            sec = "pair" if name in _SECTIONS["pair"] else "state"
            out[name] = _positive(f"{sec}.{name}", flat[name])
    for name in ("lambda_cut_0", "lambda_cut_1"):
        if name in flat:
            v = flat[name]
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ConfigError(f"field 'pair.{name}': must be a finite number")
            out[name] = float(v)
    if flat.get("d") is not None:
        out["d"] = _positive("pair.d", flat["d"])

    # grid
    t_min = flat.get("t_min", 0.0)
    t_max = flat.get("t_max", 10.0)
    if not isinstance(t_min, (int, float)) or t_min < 0:
        raise ConfigError("field 'grid.t_min': must be >= 0")
    if not isinstance(t_max, (int, float)) or not t_max > t_min:
        raise ConfigError("field 'grid.t_max': must exceed t_min")
    steps = flat.get("t_steps", 101)
    if not isinstance(steps, int) or isinstance(steps, bool) or steps < 1:
        raise ConfigError("field 'grid.t_steps': must be a positive integer")
    spacing = flat.get("t_spacing", "linear")
    if spacing not in ("linear", "log"):
        raise ConfigError("field 'grid.t_spacing': 'linear' or 'log'")
    if spacing == "log" and t_min <= 0:
        raise ConfigError("field 'grid.t_min': log spacing needs t_min > 0")
    out.update(t_min=float(t_min), t_max=float(t_max), t_steps=steps, t_spacing=spacing)

    if "d_values" in flat:
        dv = flat["d_values"]
        if not isinstance(dv, list) or not dv:
            raise ConfigError("field 'grid.d_values': must be a non-empty list")
        d_values = [_positive("grid.d_values", x) for x in dv]
    elif "d_min" in flat or "d_max" in flat:
        lo = _positive("grid.d_min", flat.get("d_min"))
        hi = _positive("grid.d_max", flat.get("d_max"))
        n = flat.get("d_steps", 10)
        if not isinstance(n, int) or n < 1 or hi < lo:
            raise ConfigError("field 'grid.d_steps': need a positive integer and d_max >= d_min")
        sp = flat.get("d_spacing", "log")
        if sp not in ("linear", "log"):
            raise ConfigError("field 'grid.d_spacing': 'linear' or 'log'")
        d_values = list((np.geomspace if sp == "log" else np.linspace)(lo, hi, n).tolist())
    elif "d" in out:
        d_values = [out["d"]]
    else:
        raise ConfigError("field 'pair.d': give a separation or a d grid")
    out["d_values"] = sorted(set(d_values))
    out.setdefault("d", out["d_values"][0])

    method = flat.get("method", "first_order")
    if method not in METHODS:
        raise ConfigError(f"field 'method': one of {', '.join(METHODS)}")
    out["method"] = method
    order = flat.get("order")
    if order is not None and (not isinstance(order, int) or order < 0):
        raise ConfigError("field 'order': must be a nonnegative integer")
    out["order"] = order
    workers = flat.get("workers", 1)
    if not isinstance(workers, int) or workers < 1:
        raise ConfigError("field 'workers': must be a positive integer")
    out["workers"] = workers
    box = flat.get("search_box")
    if box is not None:
        if not (isinstance(box, list) and len(box) == 3 and all(isinstance(x, (int, float)) for x in box)):
            raise ConfigError("field 'search_box': [x_max, y_min, y_max]")
        out["search_box"] = [float(x) for x in box]
    cfg = RunConfig(**out)
    try:
        cfg.params
        cfg.state
    except ValueError as exc:
        raise ConfigError(f"field 'pair': {exc}") from None
    return cfg


def _coerce(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(doc, items):
    """Apply ``section.key=value`` overrides (values parsed as JSON when possible)."""
    doc = copy.deepcopy(doc)
    for item in items or ():
        if "=" not in item:
            raise ConfigError(f"--set {item!r}: expected key=value")
        key, text = item.split("=", 1)
        parts = key.strip().split(".")
        target = doc
        for p in parts[:-1]:
            target = target.setdefault(p, {})
            if not isinstance(target, dict):
                raise ConfigError(f"--set {item!r}: '{p}' is not a section")
        target[parts[-1]] = _coerce(text)
    return doc


def load_config(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


# Computation -----------------------------------------------------------------


def _rows_task(args):
    params, d, state, t, method, order = args
    v = covariance_by_method(t, PairConfig(params, d), state, method, order)
    s, en, u, cm = measures_of(v, params.hbar)
    return np.column_stack([t, np.full_like(t, d), s, en, u, cm])


def compute_rows(cfg: RunConfig, t=None, d_values=None):
    """Trajectory rows sorted by ``(d, t)``; split into fixed chunks over ``workers`` processes."""
    t = cfg.t_grid() if t is None else np.asarray(t, dtype=float)
    ds = cfg.d_values if d_values is None else sorted(d_values)
    p, st = cfg.params, cfg.state
    tasks = [(p, d, st, t[i:i + CHUNK], cfg.method, cfg.order) for d in ds for i in range(0, len(t), CHUNK)]
    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            blocks = list(pool.map(_rows_task, tasks))
    else:
        blocks = [_rows_task(a) for a in tasks]
    return np.vstack(blocks)


def calibration(cfg: RunConfig):
    from .stability import d_ins, d_min

    p = cfg.params
    return {"omega_r": p.omega_r, "omega_max": p.omega_max, "d_ins": d_ins(p), "d_min": d_min(p)}


def write_csv(path, header, rows, meta):
    rows = np.asarray(rows, dtype=float)
    if not np.all(np.isfinite(rows)):
        raise ArithmeticError("non-finite values in output table")
    lines = ["# " + json.dumps(meta, sort_keys=True), ",".join(header)]
    lines += [",".join(format(float(x), ".17g") for x in r) for r in rows]
    text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def read_csv(path):
    """Metadata dict and numeric rows of a file written by ``write_csv``."""
    with open(path) as fh:
        meta = json.loads(fh.readline()[1:])
        header = fh.readline().strip().split(",")
        rows = np.loadtxt(fh, delimiter=",", ndmin=2)
    return meta, header, rows


def _meta(cfg, **extra):
    m = {"config": cfg.to_dict(), "version": __version__, "calibration": calibration(cfg)}
    m.update(extra)
    return m


def cmd_trajectory(cfg: RunConfig, out):
    rows = compute_rows(cfg)
    write_csv(out, COLUMNS, rows, _meta(cfg, command="trajectory"))


def scales_report(cfg: RunConfig):
    from .dynamics import entanglement_creation
    from .late_time import entanglement_distance, upsilon0_bound_crossing
    from .modes import reduced_params
    from .stability import classify_stability, d_ins, d_min

    p, d = cfg.params, cfg.d
    rep = classify_stability(p, d, check_roots=False)
    out = {"d": d, "classification": rep.classification, "d_ins": d_ins(p), "d_min": d_min(p)}
    if rep.classification == "unstable":
        out["note"] = "d < d_ins: mode functions grow exponentially"
    try:
        out["d_ent"] = entanglement_distance(p).d_ent
    except (ValueError, ArithmeticError) as exc:
        out["d_ent"] = None
        out["d_ent_note"] = str(exc)
    try:
        out["d_0"] = upsilon0_bound_crossing(p)
    except ValueError:
        out["d_0"] = None
    out["d_1"] = entanglement_creation(cfg.pair, cfg.state).d1
    try:
        rp = reduced_params(cfg.pair)
        out.update(gamma_plus=rp.gamma_plus, gamma_minus=rp.gamma_minus,
                   omega_plus=rp.omega_tilde_plus, omega_minus=rp.omega_tilde_minus)
    except ValueError:
        out.update(gamma_plus=None, gamma_minus=None, omega_plus=None, omega_minus=None)
    if out["d_ent"] is not None:
        out["d_ent_exceeds_d_ins"] = out["d_ent"] > out["d_ins"]
        if out["d_0"] is not None:
            out["ordered"] = out["d_min"] < out["d_ins"] < out["d_ent"] < out["d_0"]
    if isinstance(out["d_1"], float) and math.isinf(out["d_1"]):
        out["d_1"] = None
        out["d_1_note"] = "alpha**2 = hbar/omega: no finite bound"
    return out


def cmd_scales(cfg, out):
    text = json.dumps(scales_report(cfg), indent=2, sort_keys=True) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def roots_rows(params, d, box=None):
    from .stability import characteristic_roots

    rows = []
    for branch in ("+", "-"):
        for r in characteristic_roots(params, d, branch, box):
            rows.append((branch, r.k.real, r.k.imag, r.kind, r.residual))
    return rows


def _write_roots(path, rows, meta):
    lines = ["# " + json.dumps(meta, sort_keys=True), "branch,re_k,im_k,kind,residual"]
    lines += [f"{b},{format(x, '.17g')},{format(y, '.17g')},{k},{format(r, '.3e')}" for b, x, y, k, r in rows]
    text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_roots(cfg, out):
    rows = roots_rows(cfg.params, cfg.d, cfg.search_box)
    _write_roots(out, rows, _meta(cfg, command="roots"))


# Figures ---------------------------------------------------------------------

FIGURES = {
    "fig1": {"pair": {"gamma": 1e-5, "omega": 2.3, "lambda_cut_0": 20, "lambda_cut_1": 20},
             "state": {"alpha": 1.1, "beta": 4.5},
             "grid": {"t_min": 0, "t_max": 6e5, "t_steps": 121, "d_min": 0.125, "d_max": 15, "d_steps": 12},
             "method": "zeroth"},
    "fig2": {"pair": {"gamma": 1e-4, "omega": 2.3, "lambda_cut_0": 25, "lambda_cut_1": 25, "d": 1.0},
             "grid": {"d_min": 1.0, "d_max": 1e4, "d_steps": 200}},
    "fig3": {"pair": {"gamma": 1e-4, "omega": 2.3, "lambda_cut_0": 25, "lambda_cut_1": 25, "d": 1.0},
             "grid": {"d_min": 1e-4, "d_max": 1.0, "d_steps": 60}},
    "fig4": {"pair": {"gamma": 1e-4, "omega": 2.3, "lambda_cut_0": 25, "lambda_cut_1": 25, "d": 0.01},
             "state": {"alpha": 1.0, "beta": 1.0}, "method": "short_distance"},
    "fig5": {"pair": {"gamma": 1e-5, "omega": 2.3, "lambda_cut_0": 20, "lambda_cut_1": 20},
             "state": {"alpha": 1.5, "beta": 0.2},
             "grid": {"t_min": 0, "t_max": 4e4, "t_steps": 200, "d_min": 0.125, "d_max": 15, "d_steps": 40},
             "method": "first_order"},
    "fig6": {"pair": {"gamma": 1e-5, "omega": 2.3, "lambda_cut_0": 20, "lambda_cut_1": 20},
             "state": {"alpha": 1.1, "beta": 4.5},
             "grid": {"t_min": 0, "t_max": 20, "t_steps": 201, "d_min": 0.125, "d_max": 15, "d_steps": 40},
             "method": "first_order"},
    "fig7": {"pair": {"gamma": 1e-5, "omega": 2.3, "lambda_cut_0": 20, "lambda_cut_1": 20},
             "state": {"alpha": 1.0, "beta": 1.0},
             "grid": {"t_min": 0, "t_max": 20, "t_steps": 201, "d_min": 1 / 15, "d_max": 15, "d_steps": 40},
             "method": "first_order"},
    "fig8": {"pair": {"gamma": 0.25, "omega": 0.9000202, "d": 1.0}, "search_box": [6.0, -1.0, 2.2]},
}
FIG8_OMEGAS = (0.9000202, 0.8, 0.3)
FIG6_STATES = ((1.1, 4.5), (1.5, 0.2))


def _table(path, header, rows, meta):
    write_csv(path, header, rows, meta)
    return path


def _en_rel_rows(cfg):
    t = cfg.t_grid()
    rows = []
    for d in cfg.d_values:
        rel = relative_negativity(t, PairConfig(cfg.params, d), cfg.state, cfg.method, cfg.order)
        rows += list(zip(t, np.full_like(t, d), rel))
    return rows


def cmd_figure(name, doc_overrides, out_dir, workers=1):
    """Write the CSV tables behind figure ``name`` into ``out_dir``; returns the paths."""
    from .late_time import sigma_late, upsilon0_late_bound, upsilon_late

    if name not in FIGURES:
        raise ConfigError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
    doc = apply_overrides(FIGURES[name], doc_overrides)
    doc.setdefault("workers", workers)
    cfg = parse_config(doc)
    os.makedirs(out_dir, exist_ok=True)
    meta = _meta(cfg, command="figure", figure=name)
    paths = []

    def dest(tag):
        return os.path.join(out_dir, f"{name}_{tag}.csv")

    if name == "fig6":
        # one table per initial state in the caption unless the state was overridden
        states = [(cfg.alpha, cfg.beta)] if any(o.startswith("state.") for o in doc_overrides or ()) else FIG6_STATES
        for a, b in states:
            c = copy.copy(cfg)
            c.alpha, c.beta = a, b
            paths.append(_table(dest(f"trajectory_a{a:g}_b{b:g}"), COLUMNS, compute_rows(c),
                                _meta(c, command="figure", figure=name)))
    elif name in ("fig1", "fig5", "fig7"):
        paths.append(_table(dest("trajectory"), COLUMNS, compute_rows(cfg), meta))
        if name in ("fig1", "fig7"):
            early = copy.copy(cfg)
            early.t_min, early.t_max, early.t_steps, early.t_spacing = 0.0, 15.0, 121, "linear"
            paths.append(_table(dest("en_rel"), ("t", "d", "en_rel"), _en_rel_rows(early), meta))
    elif name == "fig2":
        rows = []
        for d in cfg.d_values:
            b = upsilon0_late_bound(PairConfig(cfg.params, d))
            rows.append((d, b.upsilon0, b.lower_bound))
        paths.append(_table(dest("upsilon0"), ("d", "upsilon0", "lower_bound"), rows, meta))
    elif name == "fig3":
        rows = [(d, sigma_late(PairConfig(cfg.params, d)), upsilon_late(PairConfig(cfg.params, d)))
                for d in cfg.d_values]
        paths.append(_table(dest("late"), ("d", "sigma_late", "upsilon_late"), rows, meta))
    elif name == "fig4":
        stages = {"early": (0.0, 20.0, 401, "linear"), "plateau": (0.0, 2e4, 2001, "linear"),
                  "late": (1.0, 2e9, 401, "log")}
        for tag, (a, b, n, sp) in stages.items():
            c = copy.copy(cfg)
            c.t_min, c.t_max, c.t_steps, c.t_spacing = a, b, n, sp
            paths.append(_table(dest(tag), COLUMNS, compute_rows(c), _meta(c, command="figure", figure=name)))
    elif name == "fig8":
        rows = []
        for om in FIG8_OMEGAS:
            p = DetectorParams.from_omega(cfg.gamma, om)
            rows += [(om,) + r for r in roots_rows(p, cfg.d, cfg.search_box)]
        path = dest("roots")
        lines = ["# " + json.dumps(meta, sort_keys=True), "omega,branch,re_k,im_k,kind,residual"]
        lines += [f"{format(o, '.17g')},{b},{format(x, '.17g')},{format(y, '.17g')},{k},{format(r, '.3e')}"
                  for o, b, x, y, k, r in rows]
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")
        paths.append(path)
    return paths


# Self test -------------------------------------------------------------------


def selftest():
    """Fast consistency checks; returns a list of ``(name, ok, detail)``."""
    from . import gaussian
    from .late_time import f_integral
    from .stability import characteristic_roots, d_ins

    out = []
    rng = np.random.default_rng(7)
    a = rng.normal(size=(4, 4))
    v = a @ a.T + np.eye(4)
    s1, s2 = gaussian.sigma(v), gaussian.sigma_from_spectrum(v)
    out.append(("measure identity", abs(s1 - s2) <= 1e-10 * max(1.0, abs(s1)), f"{s1:.6g} vs {s2:.6g}"))
    p = DetectorParams.from_omega(1e-4, 2.3, lambda_cut_0=25, lambda_cut_1=25)
    di = d_ins(p)
    out.append(("radius of instability", abs(di / 3.8e-5 - 1) < 0.03, f"{di:.4g}"))
    n = [sum(r.kind == "purely_imaginary" for r in characteristic_roots(DetectorParams.from_omega(0.25, om), 1.0, "+", (6, -1, 2.2)))
         for om in FIG8_OMEGAS]
    out.append(("characteristic roots", n == [2, 3, 1], f"purely imaginary counts {n}"))
    pc = PairConfig(DetectorParams.from_omega(1e-2, 2.3, lambda_cut_1=5), 1.0)
    fs, fq = f_integral(0, "+", pc, "series"), f_integral(0, "+", pc, "quadrature")
    out.append(("late-time integral routes", abs(fs - fq) <= 1e-8 * abs(fq), f"|diff| = {abs(fs - fq):.2g}"))
    return out


# Entry point -----------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="udwent", description="Entanglement of two static detectors in a scalar field.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp, config_required=True):
        sp.add_argument("--config", required=config_required, help="JSON configuration file")
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--workers", type=int, default=None, help="worker processes")
        sp.add_argument("--order", type=int, default=None, help="mutual-influence truncation order")
        sp.add_argument("--method", choices=METHODS, default=None)
        sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config field, e.g. grid.t_max=50")

    common(sub.add_parser("trajectory", help="entanglement measures on a (d, t) grid"))
    common(sub.add_parser("scales", help="length and time scales report"))
    common(sub.add_parser("roots", help="characteristic roots"))
    fig = sub.add_parser("figure", help="data behind a figure")
    fig.add_argument("name", help="fig1 ... fig8")
    common(fig, config_required=False)
    sub.add_parser("selftest", help="fast consistency checks")
    return ap


def _resolve(args):
    doc = load_config(args.config)
    doc = apply_overrides(doc, args.set)
    for key in ("workers", "order", "method"):
        v = getattr(args, key)
        if v is not None:
            doc[key] = v
    return parse_config(doc)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "selftest":
            results = selftest()
            for name, ok, detail in results:
                print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
            return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_NUMERIC
        if args.command == "figure":
            extra = list(args.set)
            for key in ("order", "method"):
                v = getattr(args, key)
                if v is not None:
                    extra.append(f"{key}={json.dumps(v)}")
            paths = cmd_figure(args.name, extra, args.out or f"{args.name}_data", args.workers or 1)
            for pth in paths:
                print(pth)
            return EXIT_OK
        cfg = _resolve(args)
        {"trajectory": cmd_trajectory, "scales": cmd_scales, "roots": cmd_roots}[args.command](cfg, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK
