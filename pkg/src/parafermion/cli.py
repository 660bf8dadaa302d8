"""Command-line front end.

    parafermion constants --format json
    parafermion weights --lambda-frac 1 8 --theta 1.5707963267948966
    parafermion verify-loop --width 3 --height 3 --lambda-frac 1 8
    parafermion saw count --lattice honeycomb --max-len 20 --format csv

Exit codes: 0 success, 1 invalid input, 2 no solution or degenerate
solution, 3 step budget exceeded.  Data goes to stdout, diagnostics to
stderr.  ``--config FILE`` reads a JSON object with the same keys as the
flags (dashes or underscores); explicit flags win.  ``HOLO_WORKERS`` sets the
default worker count.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import loopdomain, params, sawlattice, weights
from .errors import (BudgetExceededError, DegenerateSolutionError, DomainError,
                     NoSolutionError)
from .lattices import HoneycombPatch, LatticeSpec
from .output import (loop_field_to_dict, rows_to_csv, saw_field_to_dict,
                     series_to_csv, to_json)

EXIT_OK, EXIT_INVALID, EXIT_NO_SOLUTION, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


DEFAULTS = {
    "theta": math.pi / 2,
    "eps1": 1,
    "eps2": 1,
    "format": "json",
    "width": 3,
    "height": 3,
    "lattice": "honeycomb",
    "max_len": 15,
    "method": "linear_extrapolation",
    "cols": 2,
    "rows": 3,
    "sigma_saw": 5.0 / 8.0,
    "x_factor": 1.0,
    "orientation": "a",
    "tol": 1e-9,
    "budget": sawlattice.DEFAULT_BUDGET,
}

RECIPES = [
    ("holomorphicity of the closed-form weights (one grid point)",
     "parafermion residuals --lambda-frac 1 8 --theta 1.2566370614359172"),
    ("linear-system recovery",
     "parafermion solve --lambda-frac 1 8 --theta 1.5707963267948966"),
    ("brute-force contour identity on the 3x3 domain",
     "parafermion verify-loop --width 3 --height 3 --lambda-frac 1 8 --theta 1.5707963267948966"),
    ("same, with u perturbed by +0.2",
     "parafermion verify-loop --width 3 --height 3 --lambda-frac 1 8 --u 0.7890486225480862"),
    ("honeycomb walk counts to length 15",
     "parafermion saw count --lattice honeycomb --max-len 15 --format csv"),
    ("connective constant from length 25",
     "parafermion saw mu --lattice honeycomb --max-len 25 --method linear_extrapolation"),
    ("lattice constants and surface fugacities",
     "parafermion constants --format json"),
    ("walk observable at criticality on 2x3 hexagons",
     "parafermion saw verify-obs --cols 2 --rows 3 --x-factor 1.0"),
    ("walk observable off criticality",
     "parafermion saw verify-obs --cols 2 --rows 3 --x-factor 0.9"),
    ("surface series, orientation b",
     "parafermion saw surface --orientation b --max-len 12"),
]


def _add_common(p):
    p.add_argument("--format", choices=["json", "csv"])
    p.add_argument("--config", help="JSON file with default values for the flags")


def _add_lambda(p):
    p.add_argument("--lambda", dest="lam", type=float, help="crossing parameter (radians)")
    p.add_argument("--lambda-frac", dest="lambda_frac", type=int, nargs=2, metavar=("P", "Q"),
                   help="crossing parameter P*pi/Q")


def _add_angles(p):
    p.add_argument("--theta", type=float, help="embedding angle (radians)")
    p.add_argument("--u", type=float, help="spectral parameter; default is the holomorphic value")
    p.add_argument("--eps1", type=int, choices=[1, -1])
    p.add_argument("--eps2", type=int, choices=[1, -1])


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="parafermion", description=__doc__.splitlines()[0])
    ap.add_argument("--seed-recipes", action="store_true",
                    help="print the invocations reproducing each headline check")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("weights", help="closed-form Boltzmann weights")
    _add_lambda(p); _add_angles(p); _add_common(p)

    p = sub.add_parser("residuals", help="holomorphicity relations on the closed-form weights")
    _add_lambda(p); _add_angles(p); _add_common(p)
    p.add_argument("--literal-labels", action="store_true",
                   help="evaluate the relations with the elbow classes not interchanged")

    p = sub.add_parser("solve", help="recover the weights from the linear relations")
    _add_lambda(p); _add_common(p)
    p.add_argument("--theta", type=float)
    p.add_argument("--n", type=float, help="loop fugacity (overrides --lambda)")
    p.add_argument("--sigma", type=float, help="spin (overrides --lambda)")
    p.add_argument("--no-continuation", action="store_true")

    p = sub.add_parser("verify-loop", help="brute-force contour identity on a square domain")
    _add_lambda(p); _add_angles(p); _add_common(p)
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--source", nargs=3, metavar=("I", "J", "LEG"),
                   help="boundary source mid-edge, e.g. 0 1 W")
    p.add_argument("--tol", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--emit-field", action="store_true")

    saw = sub.add_parser("saw", help="self-avoiding walk tools")
    ssub = saw.add_subparsers(dest="saw_command", parser_class=_Parser)

    p = ssub.add_parser("count", help="exact walk counts")
    p.add_argument("--lattice", choices=["honeycomb", "three_twelve", "martini"])
    p.add_argument("--max-len", dest="max_len", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--budget", type=int)
    _add_common(p)

    p = ssub.add_parser("mu", help="connective-constant estimate")
    p.add_argument("--lattice", choices=["honeycomb", "three_twelve", "martini"])
    p.add_argument("--max-len", dest="max_len", type=int)
    p.add_argument("--method", choices=["raw_ratio", "linear_extrapolation"])
    p.add_argument("--workers", type=int)
    p.add_argument("--budget", type=int)
    _add_common(p)

    p = ssub.add_parser("verify-obs", help="walk observable contour identity")
    p.add_argument("--cols", type=int)
    p.add_argument("--rows", type=int)
    p.add_argument("--x", type=float, help="step fugacity (overrides --x-factor)")
    p.add_argument("--x-factor", dest="x_factor", type=float, help="x as a multiple of x_c")
    p.add_argument("--sigma", dest="sigma_saw", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--emit-field", action="store_true")
    _add_common(p)

    p = ssub.add_parser("surface", help="half-plane walks by surface contacts")
    p.add_argument("--orientation", choices=["a", "b"])
    p.add_argument("--max-len", dest="max_len", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--budget", type=int)
    _add_common(p)

    sub.add_parser("seed-recipes", help="same as --seed-recipes")

    p = sub.add_parser("constants", help="exact connective constants and surface fugacities")
    _add_common(p)
    p.add_argument("--literal-martini", action="store_true")
    return ap


def _merge_config(args):
    path = getattr(args, "config", None)
    if path:
        with open(path) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            raise DomainError("config file must hold a JSON object")
        for key, value in cfg.items():
            key = key.replace("-", "_")
            if key == "lambda":
                key = "lam"
            if hasattr(args, key) and getattr(args, key) in (None, False):
                setattr(args, key, value)
    for key, value in DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)
    if hasattr(args, "workers") and args.workers is None:
        args.workers = int(os.environ.get("HOLO_WORKERS", "1"))
    return args


def _lambda(args, required=True):
    if getattr(args, "lambda_frac", None):
        p, q = args.lambda_frac
        if q == 0:
            raise DomainError("--lambda-frac denominator must be non-zero")
        return p * math.pi / q
    if getattr(args, "lam", None) is not None:
        return float(args.lam)
    if required:
        raise DomainError("give --lambda or --lambda-frac")
    return None


def _loop_params(args) -> params.LoopParams:
    return params.LoopParams.from_lambda(_lambda(args), args.theta, args.u, args.eps1, args.eps2)


def _emit(out, payload, fmt, csv_rows=None):
    if fmt == "csv" and csv_rows is not None:
        out.write(rows_to_csv(*csv_rows))
    else:
        out.write(to_json(payload) + "\n")


def _cmd_weights(args, out):
    p = _loop_params(args)
    w = weights.compute_weights(p)
    payload = {"lambda": p.lam, "u": p.u, "theta": p.theta, "n": p.n, "sigma": p.sigma,
               "rho": list(w.rho)}
    _emit(out, payload, args.format,
          (["index", "rho"], [(k + 1, float(r)) for k, r in enumerate(w.rho)]))


def _cmd_residuals(args, out):
    p = _loop_params(args)
    w = weights.compute_weights(p)
    r = weights.holo_residuals(w, p.n, p.theta, p.sigma, crossed=not args.literal_labels)
    payload = {"lambda": p.lam, "u": p.u, "theta": p.theta, "n": p.n, "sigma": p.sigma,
               "residuals": [complex(x) for x in r], "max_abs": float(np.abs(r).max())}
    _emit(out, payload, args.format,
          (["relation", "re", "im"], [(k + 1, float(x.real), float(x.imag)) for k, x in enumerate(r)]))


def _cmd_solve(args, out):
    lam = _lambda(args, required=args.n is None or args.sigma is None)
    n = args.n if args.n is not None else params.fugacity_from_lambda(lam)
    sigma = args.sigma if args.sigma is not None else params.spin(lam)
    w = weights.solve_holo_system(n, args.theta, sigma, continuation=not args.no_continuation)
    r = weights.holo_residuals(w, n, args.theta, sigma)
    payload = {"n": n, "theta": args.theta, "sigma": sigma, "rho": list(w.rho),
               "max_residual": float(np.abs(r).max())}
    _emit(out, payload, args.format,
          (["index", "rho"], [(k + 1, float(x)) for k, x in enumerate(w.rho)]))


def _parse_leg(text):
    legs = {name: k for k, name in enumerate(loopdomain.DIR_NAMES)}
    if text.upper() not in legs:
        raise DomainError(f"leg must be one of E, N, W, S; got {text!r}")
    return legs[text.upper()]


def _cmd_verify_loop(args, out):
    p = _loop_params(args)
    dom = loopdomain.build_domain(args.width, args.height, p.theta)
    if args.source:
        source = (int(args.source[0]), int(args.source[1]), _parse_leg(args.source[2]))
    else:
        source = (0, args.height // 2, loopdomain.W)
    w = weights.compute_weights(p)
    field = loopdomain.observable(dom, w, p.n, p.sigma, source, workers=args.workers)
    res = loopdomain.contour_residuals(field)
    scale = field.max_abs
    rel = max((abs(r) for r in res.values()), default=0.0) / scale if scale else 0.0
    payload = {
        "width": args.width, "height": args.height, "lambda": p.lam, "u": p.u,
        "theta": p.theta, "n": p.n, "sigma": p.sigma,
        "source": [source[0], source[1], loopdomain.DIR_NAMES[source[2]]],
        "configurations": len(loopdomain.config_table(dom, source)),
        "max_abs_F": scale,
        "residuals": {f"{i},{j}": r for (i, j), r in res.items()},
        "max_relative_residual": rel,
        "tolerance": args.tol,
        "holomorphic": bool(rel < args.tol),
    }
    if args.emit_field:
        payload["field"] = loop_field_to_dict(field)
    _emit(out, payload, args.format,
          (["vertex", "re", "im"], [(f"{i},{j}", float(r.real), float(r.imag)) for (i, j), r in res.items()]))


def _cmd_saw_count(args, out):
    s = sawlattice.enumerate_saws(LatticeSpec(args.lattice), args.max_len, args.workers, args.budget)
    if args.format == "csv":
        out.write(series_to_csv(s.counts))
    else:
        out.write(to_json({"lattice": args.lattice, "counts": list(s.counts)}) + "\n")


def _cmd_saw_mu(args, out):
    s = sawlattice.enumerate_saws(LatticeSpec(args.lattice), args.max_len, args.workers, args.budget)
    est = sawlattice.connective_constant_estimate(s, args.method)
    exact = {"honeycomb": 1.0 / sawlattice.honeycomb_xc(),
             "three_twelve": sawlattice.mu_three_twelve(),
             "martini": sawlattice.mu_martini()}[args.lattice]
    payload = {"lattice": args.lattice, "max_len": args.max_len, "method": args.method,
               "estimate": est, "exact": exact, "relative_error": abs(est - exact) / exact}
    _emit(out, payload, args.format,
          (["lattice", "max_len", "method", "estimate", "exact"],
           [(args.lattice, args.max_len, args.method, est, exact)]))


def _cmd_saw_verify_obs(args, out):
    patch = HoneycombPatch(args.cols, args.rows)
    x = args.x if args.x is not None else args.x_factor * sawlattice.honeycomb_xc()
    field = sawlattice.saw_observable(patch, x, args.sigma_saw)
    res = {v: sawlattice.saw_vertex_residual(field, v) for v in patch.interior_vertices}
    scale = field.max_abs
    rel = max((abs(r) for r in res.values()), default=0.0) / scale if scale else 0.0
    payload = {"cols": args.cols, "rows": args.rows, "x": x, "x_c": sawlattice.honeycomb_xc(),
               "sigma": args.sigma_saw,
               "residuals": {f"{v[0]},{v[1]}": r for v, r in res.items()},
               "max_relative_residual": rel, "tolerance": args.tol,
               "holomorphic": bool(rel < args.tol)}
    if args.emit_field:
        payload["field"] = saw_field_to_dict(field)
    _emit(out, payload, args.format,
          (["vertex", "re", "im"], [(f"{v[0]},{v[1]}", float(r.real), float(r.imag)) for v, r in res.items()]))


def _cmd_saw_surface(args, out):
    s = sawlattice.surface_saw_series(args.orientation, args.max_len, args.workers, args.budget)
    payload = {"orientation": args.orientation, "counts": list(s.counts),
               "surface_poly": [list(p) for p in s.surface_poly],
               "critical_fugacity": sawlattice.critical_fugacity(args.orientation)}
    if args.format == "csv":
        out.write(series_to_csv(s.counts))
    else:
        out.write(to_json(payload) + "\n")


def constants_table(literal_martini: bool = False) -> dict:
    xc = sawlattice.honeycomb_xc()
    return {
        "mu_honeycomb": 1.0 / xc,
        "mu_3_12": sawlattice.mu_three_twelve(),
        "mu_martini": sawlattice.mu_martini(literal_rhs=literal_martini),
        "x_c": xc,
        "y_c_a": sawlattice.critical_fugacity("a"),
        "y_c_b": sawlattice.critical_fugacity("b"),
    }


def _cmd_constants(args, out):
    table = constants_table(args.literal_martini)
    _emit(out, table, args.format, (["name", "value"], list(table.items())))


def _print_recipes(out):
    for label, cmd in RECIPES:
        out.write(f"# {label}\n{cmd}\n")


COMMANDS = {
    "weights": _cmd_weights,
    "residuals": _cmd_residuals,
    "solve": _cmd_solve,
    "verify-loop": _cmd_verify_loop,
    "constants": _cmd_constants,
}
SAW_COMMANDS = {
    "count": _cmd_saw_count,
    "mu": _cmd_saw_mu,
    "verify-obs": _cmd_saw_verify_obs,
    "surface": _cmd_saw_surface,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.seed_recipes or args.command == "seed-recipes":
            _print_recipes(out)
            return EXIT_OK
        if args.command is None or (args.command == "saw" and args.saw_command is None):
            raise UsageError(parser.format_usage() + "parafermion: error: missing command")
        args = _merge_config(args)
        if args.command == "saw":
            SAW_COMMANDS[args.saw_command](args, out)
        else:
            COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_INVALID
    except (NoSolutionError, DegenerateSolutionError) as exc:
        err.write(f"parafermion: {exc}\n")
        return EXIT_NO_SOLUTION
    except BudgetExceededError as exc:
        err.write(f"parafermion: {exc}\n")
        return EXIT_BUDGET
    except (DomainError, ValueError, OSError) as exc:
        err.write(f"parafermion: {exc}\n")
        return EXIT_INVALID
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
