"""Grid-based validation of declared function properties.

These checks sample every segment densely, endpoints included from the
segment's own side, and inspect values and exact derivatives. A dense
grid cannot prove positivity or monotonicity, but a failed check is a
hard counterexample, and passing on 1024 points per segment is the
agreed bar for accepting a user-supplied function into a computation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from .piecewise import ScalarFunction

DEFAULT_GRID = 1024


@dataclass(frozen=True)
class ValidationReport:
    prop: str
    grid: int
    worst_point: float | None
    worst_value: float | None
    verdict: bool

    @staticmethod
    def passed(prop: str, grid: int) -> "ValidationReport":
        return ValidationReport(prop, grid, None, None, True)

    @staticmethod
    def failed(prop: str, grid: int, point: float, value: float) -> "ValidationReport":
        return ValidationReport(prop, grid, float(point), float(value), False)


def _resolve_interval(f: ScalarFunction, interval, what: str):
    if interval is not None:
        a, b = float(interval[0]), float(interval[1])
        if not a < b:
            raise ValidationError(f"{what} needs an interval with a < b, got [{a!r}, {b!r}]")
        f.require_covers(a, b)
        return a, b
    if f.breakpoints is None:
        raise ValidationError(f"{what} needs an explicit interval for an unbounded function")
    return f.breakpoints[0], f.breakpoints[-1]


def _segment_grids(f: ScalarFunction, a: float, b: float, grid: int):
    """Per-segment sample grids over [a, b], both endpoints included.

    Each segment is sampled with its own compiled expression, so the value
    a half-open segment approaches at its right breakpoint is seen even
    though pointwise evaluation there belongs to the next segment.
    """
    if f.breakpoints is None:
        return [(np.linspace(a, b, grid), f._evals[0])]
    out = []
    for j, fn in enumerate(f._evals):
        lo = max(a, f.breakpoints[j])
        hi = min(b, f.breakpoints[j + 1])
        if lo < hi:
            out.append((np.linspace(lo, hi, grid), fn))
        elif lo == hi and (j == 0 or lo > a):
            out.append((np.array([lo]), fn))
    return out


def _values(fn, xs: np.ndarray) -> np.ndarray:
    with np.errstate(all="ignore"):
        return np.asarray(fn(xs), dtype=float) + 0.0 * xs


def _jet_rows(fn, xs: np.ndarray):
    from . import jets

    with np.errstate(all="ignore"):
        j = fn(jets.Jet.variable(xs))
        if not isinstance(j, jets.Jet):
            j = jets.Jet.lift(j, like=xs)
        return tuple(np.asarray(p, dtype=float) + 0.0 * xs for p in (j.val, j.d1, j.d2))


def check_positivity(f: ScalarFunction, interval=None, grid: int = DEFAULT_GRID) -> ValidationReport:
    """Is f strictly positive on the grid? Non-finite samples count as failures."""
    a, b = _resolve_interval(f, interval, "positivity check")
    worst_point = None
    worst_value = np.inf
    for xs, fn in _segment_grids(f, a, b, grid):
        vals = _values(fn, xs)
        ranked = np.where(np.isfinite(vals), vals, -np.inf)
        i = int(np.argmin(ranked))
        if ranked[i] < worst_value:
            worst_value = ranked[i]
            worst_point = float(xs[i])
    if worst_value > 0.0:
        return ValidationReport.passed("positive", grid)
    shown = -np.inf if worst_value == -np.inf else worst_value
    return ValidationReport.failed("positive", grid, worst_point, shown)


def require_positive(f: ScalarFunction, interval=None, label: str = "function") -> None:
    report = check_positivity(f, interval)
    if not report.verdict:
        raise ValidationError(
            f"{label} must be positive; worst sample "
            f"{report.worst_value!r} at {report.worst_point!r}"
        )


def _require_continuity(f: ScalarFunction, what: str) -> None:
    if f.breakpoints is None or len(f.segments) == 1:
        return
    for j, b in enumerate(f.breakpoints[1:-1], start=1):
        left = f._evals[j - 1](float(b))
        right = f._evals[j](float(b))
        scale = max(1.0, abs(left), abs(right))
        if abs(left - right) > 1e-9 * scale:
            raise ValidationError(
                f"{what} needs a continuous function; jump of "
                f"{right - left!r} at breakpoint {b!r}"
            )


def check_monotonicity(
    g: ScalarFunction,
    direction: str | None = None,
    interval=None,
    grid: int = DEFAULT_GRID,
) -> ValidationReport:
    """Is g monotone in the given (or declared) direction on the grid?

    Looks at both the exact first derivative and consecutive differences,
    so a function sneaking a dip between derivative samples still has to
    get past the value comparison. Monotone means non-strict here.
    """
    if direction is None:
        direction = g.declared_monotonicity
    if direction not in ("nondecreasing", "nonincreasing"):
        raise ValidationError(
            f"direction must be nondecreasing or nonincreasing, got {direction!r}"
        )
    _require_continuity(g, "monotonicity check")
    a, b = _resolve_interval(g, interval, "monotonicity check")
    orient = 1.0 if direction == "nondecreasing" else -1.0
    worst_point = None
    worst_value = 0.0
    worst_sig = np.inf
    for xs, fn in _segment_grids(g, a, b, grid):
        val, d1, _ = _jet_rows(fn, xs)
        vscale = float(np.max(np.abs(val[np.isfinite(val)]), initial=0.0))
        dscale = float(np.max(np.abs(d1[np.isfinite(d1)]), initial=0.0))
        candidates = [(orient * d1, d1, 1e-12 * max(1.0, dscale))]
        if len(xs) > 1:
            diffs = np.diff(val)
            candidates.append((orient * diffs, diffs, 1e-12 * max(1.0, vscale)))
        for sig, raw, tol in candidates:
            sig = np.where(np.isfinite(sig), sig, -np.inf)
            i = int(np.argmin(sig))
            if sig[i] < -tol and sig[i] < worst_sig:
                worst_sig = sig[i]
                worst_point = float(xs[min(i, len(xs) - 1)])
                worst_value = float(raw[i])
    if worst_point is None:
        return ValidationReport.passed(direction, grid)
    return ValidationReport.failed(direction, grid, worst_point, worst_value)


def check_derivative_positivity(
    f: ScalarFunction,
    interval=None,
    order: int = 1,
    grid: int = DEFAULT_GRID,
) -> ValidationReport:
    """Is the order-th derivative strictly positive on the grid?"""
    if order not in (1, 2):
        raise ValidationError(f"derivative order must be 1 or 2, got {order!r}")
    a, b = _resolve_interval(f, interval, "derivative check")
    prop = f"derivative{order}_positive"
    worst_point = None
    worst_value = np.inf
    for xs, fn in _segment_grids(f, a, b, grid):
        rows = _jet_rows(fn, xs)
        der = rows[order]
        ranked = np.where(np.isfinite(der), der, -np.inf)
        i = int(np.argmin(ranked))
        if ranked[i] < worst_value:
            worst_value = ranked[i]
            worst_point = float(xs[i])
    if worst_value > 0.0:
        return ValidationReport.passed(prop, grid)
    return ValidationReport.failed(prop, grid, worst_point, worst_value)


def classify_monotonicity(g: ScalarFunction, interval=None, grid: int = DEFAULT_GRID) -> str:
    """Decide the monotone direction of g, or refuse.

    Constants classify as nondecreasing. A function that moves both ways
    on the grid raises, since downstream sign reasoning would be garbage.
    """
    _require_continuity(g, "monotonicity classification")
    a, b = _resolve_interval(g, interval, "monotonicity classification")
    rise = None
    fall = None
    for xs, fn in _segment_grids(g, a, b, grid):
        if len(xs) < 2:
            continue
        vals = _values(fn, xs)
        if not np.all(np.isfinite(vals)):
            raise ValidationError("cannot classify monotonicity: non-finite samples")
        diffs = np.diff(vals)
        tol = 1e-12 * max(1.0, float(np.max(np.abs(vals))))
        i = int(np.argmax(diffs))
        j = int(np.argmin(diffs))
        if diffs[i] > tol:
            rise = float(xs[i])
        if diffs[j] < -tol:
            fall = float(xs[j])
    if rise is not None and fall is not None:
        raise ValidationError(
            f"function is not monotone: rises near {rise!r} and falls near {fall!r}"
        )
    return "nonincreasing" if fall is not None else "nondecreasing"


__all__ = [
    "DEFAULT_GRID",
    "ValidationReport",
    "check_positivity",
    "check_monotonicity",
    "check_derivative_positivity",
    "classify_monotonicity",
    "require_positive",
]
