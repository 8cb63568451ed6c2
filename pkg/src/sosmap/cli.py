"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 preset assertion mismatch, 4 I/O.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from typing import Optional

from . import boundary as bl
from . import lab
from . import mapcore as mc
from .errors import ConditionNotSatisfied, InvalidFieldSpec, ParameterError, ParseError
from .field import Field

EXIT_OK, EXIT_INPUT, EXIT_ASSERT, EXIT_IO = 0, 2, 3, 4

DEFAULTS = {"k": 2, "tau": None, "theta": None, "h": None, "field": None,
            "y0": None, "x1": None, "steps": 1000, "trunc": 400, "out": None}


def parse_table(text: str) -> dict:
    """``"0=1,1=1.05"`` -> {0: 1.0, 1: 1.05}."""
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        j, _, v = item.partition("=")
        out[int(j)] = float(v)
    return out


def parse_field(spec: str, theta: Optional[float] = None, k: int = 2) -> Field:
    """Field from a short spec string.

    ``const:H`` | ``nuj[:THETA]`` | ``steep[:THETA]`` | ``geom:C,BASE,ALPHA`` |
    ``table:J=V,...[;default=V]``
    """
    kind, _, rest = spec.partition(":")
    try:
        if kind in ("const", "constant"):
            return Field.constant(float(rest or 1.0))
        if kind == "nuj":
            return Field.geometric_normalized(float(rest) if rest else theta)
        if kind == "steep":
            return Field.steep(float(rest) if rest else theta, k)
        if kind in ("geom", "geometric"):
            c, base, alpha = (float(v) for v in rest.split(","))
            return Field.geometric_family(c, base, alpha)
        if kind == "table":
            body, _, dflt = rest.partition(";")
            default = float(dflt.partition("=")[2]) if dflt else 0.0
            return Field.from_table(parse_table(body), default)
    except (TypeError, ValueError) as e:
        raise InvalidFieldSpec(f"bad field spec {spec!r}: {e}") from None
    raise InvalidFieldSpec(f"unknown field kind in {spec!r}")


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; keys k, tau, theta, h, h.kind, h.theta, h.table,
    h.default, y0, x1, n_steps, trunc_n."""
    cp = configparser.ConfigParser()
    with open(path) as fh:
        cp.read_string("[config]\n" + fh.read())
    raw = dict(cp["config"])
    out = {}
    for key, dest, conv in (("k", "k", int), ("tau", "tau", float), ("theta", "theta", float),
                            ("y0", "y0", float), ("x1", "x1", float), ("n_steps", "steps", int),
                            ("trunc_n", "trunc", int)):
        if key in raw:
            out[dest] = conv(raw[key])
    kind = raw.get("h.kind")
    if kind:
        if kind in ("constant", "const"):
            out["field"] = f"const:{raw.get('h', '1')}"
        elif kind in ("nuj", "geometric_normalized"):
            out["field"] = f"nuj:{raw['h.theta']}" if "h.theta" in raw else "nuj"
        elif kind == "steep":
            out["field"] = f"steep:{raw['h.theta']}" if "h.theta" in raw else "steep"
        elif kind == "table":
            out["field"] = f"table:{raw.get('h.table', '')};default={raw.get('h.default', '0')}"
        else:
            raise InvalidFieldSpec(f"unknown h.kind {kind!r}")
    elif "h" in raw:
        out["h"] = float(raw["h"])
    return out


def _settings(args) -> dict:
    s = dict(DEFAULTS)
    if getattr(args, "config", None):
        s.update(read_config(args.config))
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            s[key] = v
    if args.tau is not None:
        s["theta"] = None
    elif args.theta is not None:
        s["tau"] = None
    return s


def _tau(s) -> float:
    if s["tau"] is not None:
        return float(s["tau"])
    if s["theta"] is not None:
        return mc.tau_from_theta(float(s["theta"]))
    raise ParameterError("one of --tau or --theta is required")


def _map_field(s) -> Field:
    if s["field"]:
        return parse_field(s["field"], s["theta"], s["k"])
    return Field.constant(s["h"] if s["h"] is not None else 1.0)


def _params(s) -> mc.ModelParams:
    for key in ("y0", "x1"):
        if s[key] is None:
            raise ParameterError(f"--{key} is required")
    return mc.make_params(s["k"], _tau(s), _map_field(s), s["y0"], s["x1"])


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _range(text: str):
    lo, hi, n = text.split(",")
    return float(lo), float(hi), int(n)


# ---------------------------------------------------------------------------
# subcommands


def cmd_preset(args, s):
    report, code = lab.run_preset(args.name, s["out"] or ".")
    sys.stdout.write(lab.dumps(report))
    return code


def cmd_iterate(args, s):
    t = mc.iterate(_params(s), s["steps"])
    _emit(lab.trajectory_csv(t), s["out"])
    return EXIT_OK


def cmd_sweep(args, s):
    spec = lab.SweepSpec(s["k"], _tau(s), _map_field(s), _range(args.y0_range),
                         _range(args.x1_range), s["steps"])
    _emit(lab.sweep(spec, args.workers), s["out"])
    return EXIT_OK


def cmd_spectral(args, s):
    _emit(lab.dumps(lab.spectral_dict(_params(s))), s["out"])
    return EXIT_OK


def cmd_invariant_set(args, s):
    _emit(lab.dumps(lab.invariant_set_dict(_params(s), args.grid)), s["out"])
    return EXIT_OK


def _law(args, s) -> bl.BoundaryLaw:
    if s["theta"] is not None:
        theta = float(s["theta"])
    elif s["tau"] is not None:
        theta = mc.theta_from_tau(float(s["tau"]))
    else:
        raise ParameterError("one of --theta or --tau is required")
    field = parse_field(s["field"], theta, s["k"]) if s["field"] else None
    return lab.make_law(args.kind, theta, s["k"], field, args.rho)


def cmd_boundary_law(args, s):
    _emit(lab.dumps(lab.boundary_law_dict(_law(args, s), s["trunc"], args.imax)), s["out"])
    return EXIT_OK


def cmd_measure(args, s):
    law = _law(args, s)
    tree = bl.CayleySubtree.build(s["k"], args.depth)
    if args.spins:
        spins = [int(v) for v in args.spins.split(",")]
        if len(spins) != tree.n_vertices:
            raise ParameterError(f"need {tree.n_vertices} spins, got {len(spins)}")
    else:
        spins = [args.boundary_spin if d == tree.depth else args.interior_spin
                 for d in tree.level]
    q_field = parse_field(args.q_field, law.theta, law.k) if args.q_field else None
    value = bl.cylinder_log_measure(tree, law, spins, field=q_field,
                                    unsimplified=args.unsimplified)
    _emit(lab.dumps({"kind": law.kind, "theta": law.theta, "k": law.k, "depth": tree.depth,
                     "n_vertices": tree.n_vertices, "spins": spins, "log_measure": value}),
          s["out"])
    return EXIT_OK


def cmd_plot_data(args, s):
    with open(args.trajectory) as fh:
        pts = lab.read_trajectory_csv(fh.read())
    _emit(json.dumps(lab.plot_data(pts)) + "\n", s["out"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--k", type=int)
    g = shared.add_mutually_exclusive_group()
    g.add_argument("--tau", type=float)
    g.add_argument("--theta", type=float)
    shared.add_argument("--h", type=float, help="constant field value for n >= 1")
    shared.add_argument("--field", help="const:H | nuj[:T] | steep[:T] | geom:C,B,A | table:J=V,..[;default=V]")
    shared.add_argument("--y0", type=float)
    shared.add_argument("--x1", type=float)
    shared.add_argument("--steps", type=int)
    shared.add_argument("--trunc", type=int)
    shared.add_argument("--out")
    shared.add_argument("--config")

    ap = argparse.ArgumentParser(prog="sosmap", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preset", parents=[shared], help="run a figure preset")
    p.add_argument("name", choices=list(lab.PRESETS))
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("iterate", parents=[shared], help="trajectory CSV")
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("sweep", parents=[shared], help="positivity horizon over a (y0, x1) grid")
    p.add_argument("--y0-range", required=True, help="min,max,count")
    p.add_argument("--x1-range", required=True, help="min,max,count")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("spectral", parents=[shared], help="fixed points and eigenvalues")
    p.set_defaults(func=cmd_spectral)

    p = sub.add_parser("invariant-set", parents=[shared], help="invariant-set scalars and grid check")
    p.add_argument("--grid", type=int, default=100)
    p.set_defaults(func=cmd_invariant_set)

    for name, func, helptext in (("boundary-law", cmd_boundary_law, "closed-form boundary law report"),
                                 ("measure", cmd_measure, "cylinder log-measure on a finite subtree")):
        p = sub.add_parser(name, parents=[shared], help=helptext)
        p.add_argument("--kind", default="s1", help="s1|s2|s3|left|right|both")
        p.add_argument("--rho", type=float, default=1.0)
        p.set_defaults(func=func)
        if name == "boundary-law":
            p.add_argument("--imax", type=int, default=5)
        else:
            p.add_argument("--depth", type=int, default=1)
            p.add_argument("--spins", help="comma-separated heights in breadth-first vertex order")
            p.add_argument("--interior-spin", type=int, default=0)
            p.add_argument("--boundary-spin", type=int, default=0)
            p.add_argument("--q-field", help="field for the transfer operator (default: the law's)")
            p.add_argument("--unsimplified", action="store_true")

    p = sub.add_parser("plot-data", parents=[shared], help="unit-viewport scatter data from a trajectory CSV")
    p.add_argument("trajectory")
    p.set_defaults(func=cmd_plot_data)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args, _settings(args))
    except (ParameterError, ParseError, ConditionNotSatisfied, ValueError, ArithmeticError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
