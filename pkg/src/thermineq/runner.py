"""Scenario execution and report emission.

A report is one flat dict: scenario echo first, computed quantities
next, verdict last. Flat on purpose, since every report must survive
the trip through a CSV row; lists are ";"-joined on the way out and
nothing nests. Key order is fixed per mode so sweep headers are stable.
"""

from __future__ import annotations

import csv
import json
import sys
from dataclasses import dataclass

from .errors import ValidationError
from .scenario import (
    capacity_spec,
    function_spec,
    read_k,
    require_function,
    require_number,
    require_points,
)
from .theorems import (
    BlockSystem,
    even_k_counterexample,
    jensen_verify,
    powermean_solve,
    powermean_verify,
    solve_equilibrium,
    verify_irreversible,
    verify_reversible,
)
from .thermo import (
    irreversible_equilibrate,
    negative_capacity_experiment,
    reservoir_contact,
    reversible_equilibrate,
)

SWEEPABLE = ("x0", "T0", "a", "b", "x1", "x2", "C", "T1", "T2")


@dataclass(frozen=True)
class Options:
    """Resolved run options; precedence is the CLI's business."""

    tol: float
    quad_tol: float
    fmt: str = "table"


def _capacities(data, n_blocks):
    if "f" not in data:
        raise ValidationError("scenario is missing the 'f' field")
    return capacity_spec(data["f"], n_blocks)


def _cap_echo(system: BlockSystem):
    if system.shared:
        return system.capacities[0].text()
    return [f.text() for f in system.capacities]


def _run_reversible(data, opts):
    xs = require_points(data, "xs")
    system = BlockSystem(xs, _capacities(data, len(xs)))
    g = function_spec(data.get("g", "x"))
    k = read_k(data)
    eq = solve_equilibrium(system, g, k, quad_tol=opts.quad_tol)
    rep = verify_reversible(
        system, g, k, tol=opts.tol, quad_tol=opts.quad_tol, equilibrium=eq
    )
    return {
        "mode": "reversible",
        "theorem_id": rep.theorem_id,
        "k": k,
        "xs": list(system.xs),
        "f": _cap_echo(system),
        "g": g.text(),
        "x0": rep.x0,
        "residual": eq.residual,
        "iterations": eq.iterations,
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "margin": rep.margin,
        "tolerance": rep.tolerance,
        "direction_flipped": rep.direction_flipped,
        "satisfied": rep.satisfied,
    }


def _run_irreversible(data, opts):
    xs = require_points(data, "xs")
    system = BlockSystem(xs, _capacities(data, len(xs)))
    g = function_spec(data.get("g", "x"))
    k = read_k(data)
    x0 = require_number(data, "x0", "T0")
    rep = verify_irreversible(system, g, x0, k, tol=opts.tol, quad_tol=opts.quad_tol)
    return {
        "mode": "irreversible",
        "theorem_id": rep.theorem_id,
        "k": k,
        "xs": list(system.xs),
        "f": _cap_echo(system),
        "g": g.text(),
        "x0": rep.x0,
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "margin": rep.margin,
        "tolerance": rep.tolerance,
        "direction_flipped": rep.direction_flipped,
        "satisfied": rep.satisfied,
    }


def _run_jensen(data, opts):
    h = require_function(data, "h")
    ys = require_points(data, "ys", "xs")
    rep = jensen_verify(h, ys, tol=opts.tol, quad_tol=opts.quad_tol)
    return {
        "mode": "jensen",
        "theorem_id": rep.theorem_id,
        "h": h.text(),
        "ys": ys,
        "x0": rep.x0,
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "margin": rep.margin,
        "tolerance": rep.tolerance,
        "direction_flipped": rep.direction_flipped,
        "satisfied": rep.satisfied,
    }


def _run_powermean(data, opts):
    xs = require_points(data, "xs")
    a = require_number(data, "a")
    b = require_number(data, "b")
    k = read_k(data)
    rep = powermean_verify(xs, a, b, k, tol=opts.tol)
    return {
        "mode": "powermean",
        "theorem_id": rep.theorem_id,
        "k": k,
        "a": a,
        "b": b,
        "xs": xs,
        "x0": rep.x0,
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "margin": rep.margin,
        "tolerance": rep.tolerance,
        "direction_flipped": rep.direction_flipped,
        "satisfied": rep.satisfied,
    }


def _run_counterexample(data, opts):
    x1 = require_number(data, "x1")
    x2 = require_number(data, "x2")
    rep = even_k_counterexample(x1, x2)
    return {
        "mode": "counterexample",
        "x1": rep.x1,
        "x2": rep.x2,
        "coefficients": list(rep.coefficients),
        "discriminant": rep.discriminant,
        "has_real_root": rep.has_real_root,
        "satisfied": not rep.has_real_root,
    }


def _run_reservoir(data, opts):
    xs = require_points(data, "xs")
    system = BlockSystem(xs, _capacities(data, len(xs)))
    t0 = require_number(data, "T0", "x0")
    out = reservoir_contact(system, t0, quad_tol=opts.quad_tol)
    return {
        "mode": "reservoir",
        "xs": list(system.xs),
        "f": _cap_echo(system),
        "T0": t0,
        "T_final": out.T_final,
        "work_net": out.work_net,
        "dS_per_body": list(out.dS_per_body),
        "dS_total": out.dS_total,
        "dQ_residual": out.dQ_residual,
        "tolerance": opts.tol,
        "satisfied": out.dS_total >= -opts.tol,
    }


def _run_negcap(data, opts):
    c = require_number(data, "C")
    t1 = require_number(data, "T1")
    t2 = require_number(data, "T2")
    rep = negative_capacity_experiment(c, t1, t2, tol=opts.tol, quad_tol=opts.quad_tol)
    # A decrease is the expected finding here, so it counts as the pass.
    return {
        "mode": "negcap",
        "C": rep.C,
        "T1": rep.T1,
        "T2": rep.T2,
        "T_eq": rep.T_eq,
        "dS_total": rep.dS_total,
        "entropy_decreased": rep.entropy_decreased,
        "valid": rep.valid,
        "t2_above_threshold": rep.t2_above_threshold,
        "tolerance": opts.tol,
        "satisfied": rep.entropy_decreased,
    }


def _thermo_ledger(mode, system, out, opts, satisfied):
    return {
        "mode": mode,
        "xs": list(system.xs),
        "f": _cap_echo(system),
        "T_final": out.T_final,
        "work_net": out.work_net,
        "dS_per_body": list(out.dS_per_body),
        "dS_total": out.dS_total,
        "dQ_residual": out.dQ_residual,
        "tolerance": opts.tol,
        "satisfied": satisfied,
    }


def _thermo_reversible(data, opts):
    xs = require_points(data, "xs")
    system = BlockSystem(xs, _capacities(data, len(xs)))
    out = reversible_equilibrate(system, quad_tol=opts.quad_tol)
    ok = abs(out.dS_total) <= opts.tol and out.work_net >= -opts.tol
    return _thermo_ledger("reversible", system, out, opts, ok)


def _thermo_irreversible(data, opts):
    xs = require_points(data, "xs")
    system = BlockSystem(xs, _capacities(data, len(xs)))
    out = irreversible_equilibrate(system, quad_tol=opts.quad_tol)
    return _thermo_ledger("irreversible", system, out, opts, out.dS_total >= -opts.tol)


_RUNNERS = {
    "reversible": _run_reversible,
    "irreversible": _run_irreversible,
    "reservoir": _run_reservoir,
    "negcap": _run_negcap,
    "jensen": _run_jensen,
    "powermean": _run_powermean,
    "counterexample": _run_counterexample,
}

_THERMO_RUNNERS = {
    "reversible": _thermo_reversible,
    "irreversible": _thermo_irreversible,
    "reservoir": _run_reservoir,
    "negcap": _run_negcap,
}


def run_scenario(data: dict, opts: Options) -> dict:
    """Dispatch by mode; reversible and irreversible get the theorem check."""
    return _RUNNERS[data["mode"]](data, opts)


def run_thermo(data: dict, opts: Options) -> dict:
    """Dispatch by mode with the physics reading: full heat/entropy ledger."""
    return _THERMO_RUNNERS[data["mode"]](data, opts)


def run_solve(data: dict, opts: Options) -> dict:
    """Just the balance point, no inequality verdict."""
    mode = data["mode"]
    if mode == "reversible":
        xs = require_points(data, "xs")
        system = BlockSystem(xs, _capacities(data, len(xs)))
        g = function_spec(data.get("g", "x"))
        k = read_k(data)
        eq = solve_equilibrium(system, g, k, quad_tol=opts.quad_tol)
        return {
            "mode": "reversible",
            "k": k,
            "xs": list(system.xs),
            "f": _cap_echo(system),
            "g": g.text(),
            "x0": eq.x0,
            "residual": eq.residual,
            "bracket": list(eq.bracket),
            "iterations": eq.iterations,
            "satisfied": True,
        }
    if mode == "powermean":
        xs = require_points(data, "xs")
        b = require_number(data, "b")
        k = read_k(data)
        return {
            "mode": "powermean",
            "k": k,
            "b": b,
            "xs": xs,
            "x0": powermean_solve(xs, b, k),
            "satisfied": True,
        }
    raise ValidationError(f"solve handles modes reversible and powermean, not {mode!r}")


def sweep_grid(lo: float, hi: float, steps: int) -> list:
    """Evenly spaced grid, endpoints exact."""
    step = (hi - lo) / (steps - 1)
    values = [lo + i * step for i in range(steps)]
    values[-1] = hi
    return values


def run_sweep(data: dict, param: str, lo: float, hi: float, steps: int, opts: Options):
    """One report per grid point, param overriding whatever the file said."""
    runner = _RUNNERS[data["mode"]]
    rows = []
    for value in sweep_grid(lo, hi, steps):
        point = dict(data)
        point[param] = value
        rows.append(runner(point, opts))
    return rows, all(row["satisfied"] for row in rows)


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "%.17g" % v
    if isinstance(v, (list, tuple)):
        return ";".join(_csv_cell(e) for e in v)
    return str(v)


def emit_csv(rows, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(rows[0].keys())
    for row in rows:
        writer.writerow(_csv_cell(v) for v in row.values())


def _table_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_table_cell(e) for e in v) + "]"
    return str(v)


def emit_table(report: dict, out) -> None:
    width = max(len(key) for key in report)
    for key, value in report.items():
        out.write(f"{key.ljust(width)}  {_table_cell(value)}\n")


def emit_report(report: dict, fmt: str, out=None) -> None:
    out = out if out is not None else sys.stdout
    if fmt == "csv":
        emit_csv([report], out)
    elif fmt == "json":
        json.dump(report, out, indent=2)
        out.write("\n")
    else:
        emit_table(report, out)


__all__ = [
    "SWEEPABLE",
    "Options",
    "emit_csv",
    "emit_report",
    "emit_table",
    "run_scenario",
    "run_solve",
    "run_sweep",
    "run_thermo",
    "sweep_grid",
]
