"""Figure presets, parameter sweeps, reports and file formats."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import boundary as bl
from . import geometry as geo
from . import mapcore as mc
from . import spectral as sp
from .errors import ParameterError, ParseError
from .field import Field


def fmt(v: float) -> str:
    return format(float(v), ".17g")


def _clean(obj):
    """Make an object JSON-safe: enums to values, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        if math.isfinite(f):
            return f
        return "inf" if f > 0 else ("-inf" if f < 0 else "nan")
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


# ---------------------------------------------------------------------------
# presets


@dataclass(frozen=True)
class Preset:
    name: str
    k: int
    h: float
    tau: float
    y0: float
    x1: float
    n_steps: int
    # None: no assertion; "none": must stay positive; int: step index
    expect_first_nonpositive: Optional[object] = "none"
    first_nonpositive_tol: int = 0
    expect_regime: Optional[str] = None

    def params(self) -> mc.ModelParams:
        return mc.make_params(self.k, self.tau, Field.constant(self.h), self.y0, self.x1)

    def echo(self) -> dict:
        return {"k": self.k, "h": self.h, "tau": self.tau, "x0": 1.0, "y0": self.y0,
                "x1": self.x1, "n_steps": self.n_steps}


PRESETS: Dict[str, Preset] = {p.name: p for p in [
    Preset("fig1", 2, 1.0, 3.0, 0.5, 1.48589, 3000),
    Preset("fig2", 2, 1.0, 2.6, 0.8, 1.713, 10000),
    Preset("fig3", 2, 1.0, 4.0, 1.5, 1.0, 10000),
    Preset("fig4", 2, 1.0, 4.0, 1.5, 1.02, 10000),
    Preset("fig5", 2, 1.0, 4.0, 1.5, 0.98, 10000),
    Preset("fig6", 2, 1.0, 4.5, 1.2, 1.3, 10000),
    Preset("fig7", 2, 1.0, 4.5, 1.2, 1.3, 500),
    Preset("fig8", 2, 1.0, 4.5, 1.2, 1.3, 25),
    Preset("fig9", 2, 1.0, 4.5, 1.2, 1.2838, 10000),
    Preset("fig10", 2, 1.0, 5.5, 1.2, 1.1, 100),
    Preset("fig11", 3, 1.0, 4.0, 1.2, 0.8, 500, expect_regime="DoubleMinusOne"),
    Preset("fig12", 2, 0.5, 3.0, 1.2, 0.6, 200),
    Preset("fig13", 2, 1.05, 3.0, 1.2, 0.6, 95, expect_first_nonpositive=93,
           first_nonpositive_tol=2),
]}


def trajectory_csv(t: mc.Trajectory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "x", "y"])
    for m, (x, y) in enumerate(t.points):
        w.writerow([m, fmt(x), fmt(y)])
    return buf.getvalue()


def read_trajectory_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != ["step", "x", "y"]:
        raise ParseError("expected header 'step,x,y'")
    pts = []
    for n, r in enumerate(rows[1:], start=2):
        if not r:
            continue
        try:
            pts.append((float(r[1]), float(r[2])))
        except (IndexError, ValueError) as e:
            raise ParseError(f"line {n}: {e}") from None
    if not pts:
        raise ParseError("trajectory has no points")
    return np.array(pts)


def _fixed_point_entry(rep: sp.SpectralReport) -> dict:
    fp = rep.fixed_point
    return {
        "label": fp.label.value,
        "x": fp.location.x,
        "y": fp.location.y,
        "residual": fp.residual,
        "trace": rep.trace,
        "eigenvalues": [{"re": e.real, "im": e.imag, "abs": abs(e)} for e in rep.eigenvalues],
        "type": rep.type_tag.value,
        "regime": rep.regime.value if rep.regime else None,
        "resonances": sorted(r.value for r in rep.resonances),
        "rotation_angle": rep.rotation_angle,
        "theta_tau_paper": rep.theta_tau_paper,
    }


def spectral_dict(p: mc.ModelParams) -> dict:
    reps = sp.spectral_reports(p)
    return {
        "params": {"k": p.k, "tau": p.tau, "theta": p.theta, "h": p.bulk_h(),
                   "y0": p.y0, "x1": p.x1, "coeff0": p.coeff0},
        "thresholds": dict(zip(("tau_ns_upper", "tau_strong"), sp.regime_thresholds(p.k))),
        "fixed_points": [_fixed_point_entry(r) for r in reps],
    }


def report_spectral(k: int, tau: float, h: float, y0: float, x1: float) -> str:
    return dumps(spectral_dict(mc.make_params(k, tau, Field.constant(h), y0, x1)))


def preset_report(preset: Preset) -> Tuple[dict, mc.Trajectory]:
    p = preset.params()
    t = mc.iterate(p, preset.n_steps)
    max_abs, positive, bounded = mc.boundedness_stats(t)
    spec = spectral_dict(p)
    regime = spec["fixed_points"][1]["regime"]
    checks = []
    exp = preset.expect_first_nonpositive
    if exp == "none":
        checks.append({"name": "first_nonpositive", "expected": None,
                       "actual": t.first_nonpositive, "ok": t.first_nonpositive is None})
    elif exp is not None:
        ok = (t.first_nonpositive is not None
              and abs(t.first_nonpositive - exp) <= preset.first_nonpositive_tol)
        checks.append({"name": "first_nonpositive",
                       "expected": f"{exp} +/- {preset.first_nonpositive_tol}",
                       "actual": t.first_nonpositive, "ok": ok})
    if preset.expect_regime is not None:
        checks.append({"name": "regime", "expected": preset.expect_regime,
                       "actual": regime, "ok": regime == preset.expect_regime})
    report = {
        "preset": preset.name,
        "params": preset.echo(),
        "theta": p.theta,
        "coeff0": p.coeff0,
        "n_points": len(t),
        "first_nonpositive": t.first_nonpositive,
        "escaped_at": t.escaped_at,
        "max_abs": max_abs,
        "is_positive": positive,
        "is_bounded": bounded,
        "fixed_points": spec["fixed_points"],
        "regime": regime,
        "assertions": checks,
        "ok": all(c["ok"] for c in checks),
    }
    return report, t


def run_preset(name: str, out_dir: str) -> Tuple[dict, int]:
    """Write ``<name>.csv`` and ``<name>.json`` into ``out_dir``; return (report, exit code)."""
    if name not in PRESETS:
        raise ParameterError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    report, t = preset_report(PRESETS[name])
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, f"{name}.csv"), "w", newline="") as fh:
        fh.write(trajectory_csv(t))
    with open(os.path.join(out_dir, f"{name}.json"), "w") as fh:
        fh.write(dumps(report))
    return report, 0 if report["ok"] else 3


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepSpec:
    k: int
    tau: float
    field: Field
    y0_range: Tuple[float, float, int]
    x1_range: Tuple[float, float, int]
    n_steps: int

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        for lo, hi, n in (self.y0_range, self.x1_range):
            if n < 1:
                raise ParameterError("sweep ranges need at least one point")
        return (np.linspace(*self.y0_range[:2], int(self.y0_range[2])),
                np.linspace(*self.x1_range[:2], int(self.x1_range[2])))


def _sweep_row(args) -> List[str]:
    spec, y0, x1s = args
    rows = []
    for x1 in x1s:
        try:
            p = mc.make_params(spec.k, spec.tau, spec.field, y0, x1)
        except ParameterError:
            rows.append(f"{fmt(y0)},{fmt(x1)},0,,")
            continue
        t = mc.iterate(p, spec.n_steps)
        hz = str(t.first_nonpositive) if t.first_nonpositive is not None else f">={spec.n_steps}"
        rows.append(f"{fmt(y0)},{fmt(x1)},1,{hz},{fmt(t.max_abs)}")
    return rows


def sweep(spec: SweepSpec, workers: int = 1) -> str:
    """Positivity horizon over a (y0, x1) grid as CSV text, rows in y0-major order."""
    y0s, x1s = spec.axes()
    jobs = [(spec, float(y0), [float(x) for x in x1s]) for y0 in y0s]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(_sweep_row, jobs))
    else:
        chunks = [_sweep_row(j) for j in jobs]
    lines = ["y0,x1,admissible,horizon,max_abs"]
    for c in chunks:
        lines.extend(c)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# invariant set and boundary-law reports


def invariant_set_dict(p: mc.ModelParams, grid_n: int = 100) -> dict:
    spec = geo.invariant_set(p)
    out = {"a": spec.a, "x_hat": spec.x_hat, "x_hat0": spec.x_hat0,
           "x_star_max": spec.x_star_max, "tau_bound": geo.invariance_tau_bound(p.k),
           "condition_ok": spec.condition_ok}
    if spec.condition_ok:
        v, worst = geo.verify_invariance(spec, p, grid_n)
        out.update(grid_n=grid_n, violations=v, worst_margin=worst)
    return out


LAW_ALIASES = {"s1": "left_infinite", "left": "left_infinite",
               "s2": "right_infinite", "right": "right_infinite",
               "s3": "both_infinite", "both": "both_infinite"}


def make_law(kind: str, theta: float, k: int, field: Optional[Field] = None,
             rho: float = 1.0) -> bl.BoundaryLaw:
    kind = LAW_ALIASES.get(kind, kind)
    if kind == "left_infinite":
        return bl.left_infinite(theta, k, field)
    if kind == "right_infinite":
        return bl.right_infinite(theta, k, field)
    if kind == "both_infinite":
        return bl.both_infinite(theta, k, rho, field)
    raise ParameterError(f"unknown boundary-law kind {kind!r}")


def boundary_law_dict(law: bl.BoundaryLaw, trunc_n: int = 400, imax: int = 5) -> dict:
    z = {}
    for i in range(-imax, imax + 1):
        lz = bl.log_z(law, i)
        z[str(i)] = {"z": math.exp(lz) if lz < bl.LOG_MAX else None, "log_z": lz}
    residuals = {}
    for i in range(-imax, imax + 1):
        if i == 0:
            continue
        r, ratio = bl.verify_solution_ratio(law, i, trunc_n)
        residuals[str(i)] = {"residual": r, "ratio": ratio}
    conds = bl.law_conditions(law, trunc_n)
    norm = bl.normalisability_check(law, max(trunc_n, 10))
    return {
        "kind": law.kind,
        "theta": law.theta,
        "k": law.k,
        "rho": law.rho if law.kind == "both_infinite" else None,
        "field": law.field.describe(),
        "trunc_n": trunc_n,
        "z": z,
        "conditions": conds,
        "valid_solution": conds.get("valid"),
        "verification": residuals,
        "normalisable": {"status": norm.status.value, "method": norm.method.value},
    }


# ---------------------------------------------------------------------------
# plot data


def plot_data(points: np.ndarray) -> dict:
    """Scale points uniformly into the unit square, centred; deterministic."""
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        raise ParseError("no points to scale")
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = float(max(hi - lo))
    centre = (lo + hi) / 2
    if span > 0:
        uv = 0.5 + (pts - centre) / span
    else:
        uv = np.full_like(pts, 0.5)
    return {
        "n_points": len(pts),
        "bbox": {"xmin": lo[0], "xmax": hi[0], "ymin": lo[1], "ymax": hi[1]},
        "scale": span,
        "points": [[float(u), float(v)] for u, v in uv],
        "svg_points": " ".join(f"{u:.6f},{1 - v:.6f}" for u, v in uv),
    }
