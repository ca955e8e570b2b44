"""Command line front end: ``epdkit <group> <command> [options]``.

Reports go to ``--out`` (or stdout) as JSON, or as CSV holding the command's
main table.  ``--plot DIR`` additionally renders PNG figures for commands that
have one.  Options may also come from a JSON ``--config`` file, either flat or
keyed by ``"<group> <command>"``; command-line values win.

Exit codes: 0 success, 1 unknown command, 2 invalid input, 3 numerical
regime error (pole in alpha, infeasible precision, non-convergence).
"""

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
import time

import mpmath
import numpy as np

from . import __version__
from .bessel import BesselEvaluator
from .epd import asgeirsson_check, convergence_order, propagate, slow_decrease_profile
from .errors import DomainError, EpdError, PoleError, RegimeError
from .grid import GridFunction
from .liouville import (generalized_lattice, liouville_quality, measure_cover, theta,
                        theta_chain)
from .snapshot import (SnapshotProblem, compatibility_residual, kernel_witness, make_problem,
                       reconstruct, small_denominator_scan)
from .zeros import complex_zeros, find_order_with_ratio, real_zeros, zero_ratio_f

EXIT_OK, EXIT_UNKNOWN, EXIT_INVALID, EXIT_REGIME = 0, 1, 2, 3


# -- argument types -------------------------------------------------------------


def complex_arg(text):
    """``"re,im"``, a real number, or a complex literal such as ``1+0.5j`` or ``1+0.5i``."""
    text = str(text).strip()
    try:
        if "," in text:
            re_, im_ = text.split(",")
            return complex(float(re_), float(im_))
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return v


def positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text}")
    return v


def float_list(text):
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None


def int_list(text):
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from None


def bit_string(text):
    text = str(text).strip()
    if not text or set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError(f"bits must be a string of 0/1: {text!r}")
    return text


def _cx(z):
    return [float(z.real), float(z.imag)]


def _digest(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _lattice(nu, count=100):
    nu = complex(nu)
    if nu.imag == 0 and nu.real > -1:
        return real_zeros(nu.real, count)
    return complex_zeros(nu, count)


# -- command implementations --------------------------------------------------------
# each returns (result dict, table columns, table rows, figure callbacks)


def cmd_bessel_eval(a):
    ev = BesselEvaluator(a.nu, crossover_radius=a.crossover)
    zs = list(a.z)
    if a.z_range:
        lo, hi, num = a.z_range
        zs += [complex(v) for v in np.linspace(lo, hi, int(num))]
    if not zs:
        raise DomainError("give --z or --z-range")
    rows = []
    for z in zs:
        v, d = ev(z), ev.derivative(z)
        route = "series" if abs(z) < a.crossover else "hankel"
        rows.append([z.real, z.imag, v.real, v.imag, d.real, d.imag, route])
    cols = ["z_re", "z_im", "j_re", "j_im", "dj_re", "dj_im", "route"]
    return {"nu": _cx(ev.order), "count": len(rows)}, cols, rows, []


def cmd_bessel_zeros(a):
    nu = complex(a.nu)
    if nu.imag == 0 and nu.real > -1 and a.start == 1:
        lat = real_zeros(nu.real, a.count)
    else:
        lat = complex_zeros(nu, a.count, start=a.start)
    ev = BesselEvaluator(nu)
    rows = []
    for m in lat.indices:
        z = lat.table[m]
        rows.append([m, z.real, z.imag, abs(ev(z))])
    result = {"nu": _cx(nu), "count": len(rows), "missing": list(lat.missing),
              "exact": lat.exact, "tail_constant": lat.tail_constant}
    figs = []
    if len(rows) > 1:
        from . import plotting

        figs.append(("zero_spacings.png",
                     lambda p: plotting.zero_spacings(np.array(lat.indices), lat.values, p, nu=a.nu)))
    return result, ["index", "re", "im", "residual"], rows, figs


def cmd_bessel_ratio(a):
    if a.target is not None:
        nu = find_order_with_ratio(a.target, tuple(a.bracket), tol=a.tol)
        return {"target": a.target, "nu": nu, "f_nu": zero_ratio_f(nu)}, ["nu", "f"], [[nu, zero_ratio_f(nu)]], []
    nus = a.nu_list or [0.0, 0.5]
    rows = [[v, zero_ratio_f(v)] for v in nus]
    result = {"values": {str(v): f for v, f in rows}}
    if 0.0 in nus:
        f0 = dict(rows)[0.0]
        # the classical bracket for a_{0,1}, a_{0,2} would force f(0) > 14/23
        result["f0_below_half"] = f0 < 0.5
        result["f0_bracket_14_23_holds"] = f0 > 14 / 23
    return result, ["nu", "f"], rows, []


def _lattice_from_args(a):
    if getattr(a, "points", None):
        return generalized_lattice(values=a.points)
    if getattr(a, "step", None):
        return generalized_lattice(step=a.step)
    return _lattice(a.nu)


def cmd_liouville_theta(a):
    lat = _lattice_from_args(a)
    with mpmath.workdps(40):
        v = theta(lat, a.n, a.x if lat.exact else mpmath.mpf(a.x))
        text = str(v) if lat.exact else mpmath.nstr(v, 30)
        return {"n": a.n, "x": a.x, "theta": text, "theta_float": float(v)}, ["n", "x", "theta"], [[a.n, a.x, text]], []


def cmd_liouville_chain(a):
    lat = _lattice_from_args(a)
    bits = a.bits
    if a.depth is not None:
        if a.depth > len(bits):
            raise DomainError(f"--depth {a.depth} exceeds the {len(bits)} given bits")
        bits = bits[: a.depth]
    chain = theta_chain(lat, bits, a.cutoff, a.x_start, a.C, max_dps=a.max_dps)
    d = chain.to_dict(digits=a.digits)
    rows = [[m + 1, d["indices"][m], d["values"][m], d["certified_error"][m]] for m in range(chain.depth)]
    return d, ["m", "n_m", "theta_m", "certified_error"], rows, []


def cmd_liouville_quality(a):
    lat = _lattice_from_args(a)
    best = liouville_quality(a.x, lat, a.bound)
    d = best.to_dict()
    d["x"] = a.x
    d["gap"] = mpmath.nstr(best.gap, 15)
    return d, ["k", "n", "gap", "exponent"], [[best.k, best.n, d["gap"], best.exponent]], []


def cmd_liouville_measure(a):
    lat = _lattice_from_args(a)
    rows = []
    for p in a.p:
        mc = measure_cover(lat, a.L, p, a.n_max)
        rows.append([p, mc.measure, mc.bound, mc.c3])
    result = {"L": a.L, "n_max": a.n_max,
              "decreasing": all(rows[i + 1][1] < rows[i][1] for i in range(len(rows) - 1)),
              "below_bound": all(r[1] <= r[2] for r in rows)}

    def fig(path):
        from . import plotting

        return plotting.measure_curve([r[0] for r in rows], [r[1] for r in rows], [r[2] for r in rows], path)

    return result, ["p", "measure", "bound", "C3"], rows, [("measure_vs_p.png", fig)]


def cmd_epd_propagate(a):
    f = GridFunction.load(a.input)
    u = propagate(f, a.t, a.alpha)
    if a.grid_out:
        u.save(a.grid_out)
    result = {"n": f.n, "P": f.P, "L": f.L, "t": a.t, "alpha": _cx(a.alpha),
              "norm_in": f.norm_inf(), "norm_out": u.norm_inf(), "grid_out": a.grid_out}
    return result, ["n", "P", "t", "norm_in", "norm_out"], [[f.n, f.P, a.t, f.norm_inf(), u.norm_inf()]], []


def cmd_epd_residual(a):
    f = GridFunction.load(a.input)
    orders, res = convergence_order(f, a.alpha, a.t, a.ht, a.levels)
    rows = []
    for lev in range(a.levels):
        for i, t in enumerate(a.t):
            order = float(orders[lev - 1, i]) if lev else ""
            rows.append([a.ht / 2**lev, t, float(res[lev, i]), order])
    result = {"alpha": _cx(a.alpha), "t": a.t, "final_orders": [float(v) for v in orders[-1]]}
    return result, ["h_t", "t", "residual", "order"], rows, []


def cmd_epd_asgeirsson(a):
    f = GridFunction.load(a.input)
    x = a.x if a.x else [0.0] * f.n
    worst = asgeirsson_check(f, a.alpha, [x], a.times, route=a.route)
    return {"route": a.route, "max_asymmetry": worst}, ["route", "max_asymmetry"], [[a.route, worst]], []


def cmd_epd_slowdecrease(a):
    sd = slow_decrease_profile(a.nu, a.t, a.xi_max)
    rows = [[float(x), float(p)] for x, p in zip(sd.xi, sd.profile)]

    def fig(path):
        from . import plotting

        return plotting.slow_decrease(sd.xi, sd.profile, sd.c, complex(a.nu).real, a.t, path)

    return sd.to_dict(), ["xi", "window_max"], rows, [("slow_decrease.png", fig)]


def _problem(a):
    return SnapshotProblem(GridFunction.load(a.g), GridFunction.load(a.h), a.r, a.s, a.alpha)


def cmd_snapshot_make(a):
    f = GridFunction.load(a.f)
    p = make_problem(f, a.r, a.s, a.alpha)
    p.g.save(a.g_out)
    p.h.save(a.h_out)
    result = {"g_out": a.g_out, "h_out": a.h_out, "compatibility": compatibility_residual(p)}
    return result, ["g_out", "h_out"], [[a.g_out, a.h_out]], []


def cmd_snapshot_check(a):
    res = compatibility_residual(_problem(a))
    return {"compatibility": res}, ["compatibility"], [[res]], []


def _floor_arg(text):
    if text in ("auto", "default"):
        return text
    parts = text.split(",")
    try:
        if len(parts) == 2:
            return float(parts[0]), float(parts[1])
        return float(text)
    except ValueError:
        raise DomainError(f"--floor must be auto, default, a number or C,N: {text!r}") from None


def cmd_snapshot_reconstruct(a):
    p = _problem(a)
    rep = reconstruct(p, _floor_arg(a.floor), tol=a.tol)
    if a.f_out:
        rep.f.save(a.f_out)
    d = rep.to_dict()
    d["f_out"] = a.f_out
    rows = [list(k) for k in rep.flagged]
    return d, ["k%d" % (i + 1) for i in range(p.n)], rows, []


def cmd_snapshot_scan(a):
    sc = small_denominator_scan(a.r, a.s, a.nu, a.zmax)
    rows = [[float(z), float(d)] for z, d in zip(sc.z, sc.D)]

    def fig(path):
        from . import plotting

        return plotting.denominator_profile(sc.z, sc.D, path, sc.C, sc.N)

    return sc.to_dict(), ["z", "D"], rows, [("denominator_profile.png", fig)]


def cmd_snapshot_witness(a):
    w = kernel_witness(a.r, a.s, a.nu, index_bound=a.index_bound, n=a.n, P=a.P)
    if w is None:
        return {"witness": None}, ["z", "a", "b"], [], []
    if a.grid_out:
        w.f.save(a.grid_out)
    d = w.to_dict()
    d["grid_out"] = a.grid_out
    return d, ["z", "a", "b", "norm_r", "norm_s"], [[w.z, w.a, w.b, w.norm_r, w.norm_s]], []


def cmd_grid_make(a):
    if a.kind == "cos":
        f = GridFunction.cosine(a.n, a.P, a.L, a.k or [1])
    elif a.kind == "random":
        f = GridFunction.random_trig(a.n, a.P, a.L, a.kmax, seed=a.seed)
    else:
        f = GridFunction.constant(1.0, a.n, a.P, a.L)
    f.save(a.grid_out)
    return {"grid_out": a.grid_out, "n": a.n, "P": a.P, "L": a.L}, ["grid_out"], [[a.grid_out]], []


# -- parser ---------------------------------------------------------------------------


def _add_lattice_opts(p):
    p.add_argument("--nu", type=complex_arg, default=complex(0.5), help="Bessel order (re,im)")
    p.add_argument("--step", type=positive_float, help="use the lattice step*{1,2,...} instead of zeros")
    p.add_argument("--points", type=float_list, help="use this finite set as the lattice")


def _add_problem_opts(p):
    p.add_argument("--g", required=True, help="snapshot at time s")
    p.add_argument("--h", required=True, help="snapshot at time r")
    p.add_argument("--r", type=positive_float, required=True)
    p.add_argument("--s", type=positive_float, required=True)
    p.add_argument("--alpha", type=complex_arg, default=complex(0))


def build_parser():
    parser = argparse.ArgumentParser(prog="epdkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON file of option defaults")
    parser.add_argument("--out", help="report path (default: stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--plot", metavar="DIR", help="also write PNG figures into DIR")
    groups = parser.add_subparsers(dest="group", metavar="group")
    commands = {}

    def add(group_parser, name, func, help_text):
        p = group_parser.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        commands[(group_parser.group_name, name)] = p
        return p

    def group(name, help_text):
        sub = groups.add_parser(name, help=help_text).add_subparsers(dest="command", metavar="command")
        sub.group_name = name
        return sub

    g = group("bessel", "normalized Bessel functions and their zeros")
    p = add(g, "eval", cmd_bessel_eval, "evaluate j_nu and its derivative")
    p.add_argument("--nu", type=complex_arg, required=True)
    p.add_argument("--z", type=complex_arg, action="append", default=[])
    p.add_argument("--z-range", type=float_list, help="lo,hi,count on the real axis")
    p.add_argument("--crossover", type=positive_float, default=25.0)
    p = add(g, "zeros", cmd_bessel_zeros, "zeros a_m of j_nu")
    p.add_argument("--nu", type=complex_arg, required=True)
    p.add_argument("--count", type=positive_int, default=10)
    p.add_argument("--start", type=positive_int, default=1, help="first index (complex orders default to 3)")
    p = add(g, "ratio", cmd_bessel_ratio, "f(nu) = a_1/a_2, or solve f(nu) = target")
    p.add_argument("--nu-list", type=float_list)
    p.add_argument("--target", type=float)
    p.add_argument("--bracket", type=float_list, default=[-0.999, 2.0])
    p.add_argument("--tol", type=positive_float, default=1e-10)

    g = group("liouville", "zero-ratio rationals, chains, covering measure")
    p = add(g, "theta", cmd_liouville_theta, "one theta step")
    _add_lattice_opts(p)
    p.add_argument("--n", type=positive_int, required=True)
    p.add_argument("--x", type=str, required=True)
    p = add(g, "chain", cmd_liouville_chain, "Theta chain for a bit string")
    _add_lattice_opts(p)
    p.add_argument("--cutoff", type=positive_int, default=10)
    p.add_argument("--bits", type=bit_string, required=True)
    p.add_argument("--depth", type=positive_int)
    p.add_argument("--x-start", type=str, default="0.5")
    p.add_argument("--C", type=positive_float, default=3.0)
    p.add_argument("--max-dps", type=positive_int, default=5000)
    p.add_argument("--digits", type=positive_int, default=40)
    p = add(g, "quality", cmd_liouville_quality, "best zero-ratio approximation exponent")
    _add_lattice_opts(p)
    p.add_argument("--x", type=str, required=True)
    p.add_argument("--bound", type=positive_float, default=1e6, help="largest admissible a_n")
    p = add(g, "measure", cmd_liouville_measure, "covering measure against p")
    _add_lattice_opts(p)
    p.add_argument("--L", type=positive_float, default=2.0)
    p.add_argument("--p", type=float_list, default=[3, 4, 5, 6, 7, 8])
    p.add_argument("--n-max", type=positive_int, default=200)

    g = group("epd", "EPD propagator on periodic grids")
    p = add(g, "propagate", cmd_epd_propagate, "u(., t) from f")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--grid-out")
    p.add_argument("--alpha", type=complex_arg, default=complex(0))
    p.add_argument("--t", type=float, required=True)
    p = add(g, "residual", cmd_epd_residual, "PDE residual and convergence order")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--alpha", type=complex_arg, default=complex(0))
    p.add_argument("--t", type=float_list, default=[0.5, 1.0, 2.0])
    p.add_argument("--ht", type=positive_float, default=0.1)
    p.add_argument("--levels", type=positive_int, default=3)
    p = add(g, "asgeirsson", cmd_epd_asgeirsson, "U(s,t) = U(t,s) check")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--alpha", type=complex_arg, default=complex(0))
    p.add_argument("--x", type=float_list)
    p.add_argument("--times", type=float_list, default=[0.5, 1.0, 1.5])
    p.add_argument("--route", choices=("spectral", "quadrature"), default="spectral")
    p = add(g, "slowdecrease", cmd_epd_slowdecrease, "windowed lower envelope of |j_nu|")
    p.add_argument("--nu", type=complex_arg, required=True)
    p.add_argument("--t", type=positive_float, default=1.0)
    p.add_argument("--xi-max", type=positive_float, default=200.0)

    g = group("snapshot", "two-snapshot problem")
    p = add(g, "make", cmd_snapshot_make, "forward snapshots from f")
    p.add_argument("--f", required=True)
    p.add_argument("--r", type=positive_float, required=True)
    p.add_argument("--s", type=positive_float, required=True)
    p.add_argument("--alpha", type=complex_arg, default=complex(0))
    p.add_argument("--g-out", required=True)
    p.add_argument("--h-out", required=True)
    p = add(g, "check", cmd_snapshot_check, "compatibility residual")
    _add_problem_opts(p)
    p = add(g, "reconstruct", cmd_snapshot_reconstruct, "recover f from g and h")
    _add_problem_opts(p)
    p.add_argument("--floor", default="default", help="default | auto | <number> | C,N")
    p.add_argument("--tol", type=positive_float, default=1e-8)
    p.add_argument("--f-out")
    p = add(g, "scan", cmd_snapshot_scan, "small-denominator lower bound")
    p.add_argument("--r", type=positive_float, required=True)
    p.add_argument("--s", type=positive_float, required=True)
    p.add_argument("--nu", type=complex_arg, required=True)
    p.add_argument("--zmax", type=positive_float, default=200.0)
    p = add(g, "witness", cmd_snapshot_witness, "kernel witness for resonant r/s")
    p.add_argument("--r", type=positive_float, required=True)
    p.add_argument("--s", type=positive_float, required=True)
    p.add_argument("--nu", type=complex_arg, required=True)
    p.add_argument("--n", type=int, choices=(1, 2, 3), default=3)
    p.add_argument("--P", type=positive_int, default=16)
    p.add_argument("--index-bound", type=positive_int, default=50)
    p.add_argument("--grid-out")

    g = group("grid", "grid-file helpers")
    p = add(g, "make", cmd_grid_make, "write a test grid")
    p.add_argument("--n", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--P", type=positive_int, default=16)
    p.add_argument("--L", type=positive_float, default=2 * math.pi)
    p.add_argument("--kind", choices=("cos", "random", "one"), default="cos")
    p.add_argument("--k", type=int_list)
    p.add_argument("--kmax", type=positive_int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid-out", required=True)
    return parser, commands


# -- report emission -------------------------------------------------------------------


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, complex):
        return _cx(v)
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return str(v)


def _render(report, fmt, cols, rows):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in r])
        return buf.getvalue()
    return json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n"


def _split_argv(argv):
    """Locate the group/command tokens, skipping global options and their values."""
    takes_value = {"--config", "--out", "--format", "--plot"}
    i, found = 0, []
    while i < len(argv) and len(found) < 2:
        tok = argv[i]
        if tok in takes_value:
            i += 2
            continue
        if tok.startswith("-"):
            if tok in ("-h", "--help", "--version"):
                return None
            i += 1
            continue
        found.append(tok)
        i += 1
    return found


def _hoist_globals(argv):
    """Move global options given after the command to the front of argv."""
    takes_value = ("--config", "--out", "--format", "--plot")
    front, rest, i = [], [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in takes_value and i + 1 < len(argv):
            front += argv[i:i + 2]
            i += 2
            continue
        if tok.split("=", 1)[0] in takes_value and "=" in tok:
            front.append(tok)
        else:
            rest.append(tok)
        i += 1
    return front + rest


def _load_config(path, key, sub):
    with open(path) as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise DomainError("config must be a JSON object")
    flat = {k: v for k, v in cfg.items() if not isinstance(v, dict)}
    flat.update(cfg.get(key, {}))
    known = {a.dest: a for a in sub._actions}
    out = {}
    for k, v in flat.items():
        dest = k.replace("-", "_")
        if dest not in known:
            continue
        action = known[dest]
        if isinstance(v, list):
            v = ",".join(str(x) for x in v)
        if action.type is not None and isinstance(v, (str, int, float)):
            try:
                v = action.type(str(v)) if action.type is not str else str(v)
            except (argparse.ArgumentTypeError, ValueError) as exc:
                raise DomainError(f"config {k}: {exc}") from None
        out[dest] = v
    return out


def main(argv=None):
    argv = _hoist_globals(list(sys.argv[1:] if argv is None else argv))
    parser, commands = build_parser()
    found = _split_argv(argv)
    if found is not None:
        key = tuple(found)
        if len(key) < 2 or key not in commands:
            parser.print_usage(sys.stderr)
            known = ", ".join(" ".join(k) for k in sorted(commands))
            print(f"epdkit: unknown command {' '.join(found) or '(none)'!r}; choose from: {known}", file=sys.stderr)
            return EXIT_UNKNOWN
        if "--config" in argv:
            cfg_path = argv[argv.index("--config") + 1] if argv.index("--config") + 1 < len(argv) else None
            try:
                defaults = _load_config(cfg_path, " ".join(key), commands[key])
            except (OSError, json.JSONDecodeError, DomainError, TypeError) as exc:
                print(f"epdkit: invalid config: {exc}", file=sys.stderr)
                return EXIT_INVALID
            commands[key].set_defaults(**defaults)
            # config may satisfy options marked required on the command line
            for act in commands[key]._actions:
                if act.dest in defaults:
                    act.required = False
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code not in (0, None) else EXIT_OK
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return EXIT_UNKNOWN
    start = time.perf_counter()
    try:
        result, cols, rows, figures = args.func(args)
    except (PoleError, RegimeError) as exc:
        print(f"epdkit: numerical regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except (DomainError, OSError, json.JSONDecodeError) as exc:
        print(f"epdkit: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except EpdError as exc:
        print(f"epdkit: {exc}", file=sys.stderr)
        return EXIT_REGIME
    echo = {k: v for k, v in vars(args).items() if k not in ("func", "config")}
    inputs = {}
    for name in ("input", "f", "g", "h"):
        path = getattr(args, name, None)
        if isinstance(path, str) and os.path.exists(path):
            inputs[path] = _digest(path)
    written = []
    if args.plot and figures:
        os.makedirs(args.plot, exist_ok=True)
        for fname, draw in figures:
            try:
                written.append(draw(os.path.join(args.plot, fname)))
            except EpdError as exc:
                print(f"epdkit: figure skipped: {exc}", file=sys.stderr)
    report = {
        "command": f"{args.group} {args.command}",
        "version": __version__,
        "args": echo,
        "inputs": inputs,
        "result": result,
        "table": {"columns": cols, "rows": rows},
        "figures": written,
        "timing_s": round(time.perf_counter() - start, 6),
    }
    text = _render(report, args.format, cols, rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
