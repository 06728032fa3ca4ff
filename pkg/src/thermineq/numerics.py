"""Quadrature and root finding.

Integrals are signed: integrate(f, a, b) == -integrate(f, b, a) holds
exactly, because the machinery always integrates over the sorted interval
and applies the sign afterwards. Piecewise integrands are pre-split at
their breakpoints so the adaptive rule only ever sees smooth material.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketError, EvalDomainError, NumericsError, ValidationError
from .funcexpr.piecewise import ScalarFunction

DEFAULT_QUAD_TOL = 1e-10
DEFAULT_RESIDUAL_TOL = 1e-10
MAX_DEPTH = 60
MAX_ROOT_ITERATIONS = 200
GAUSS_NODES = 32
SEPARABLE_K_LIMIT = 9
TENSOR_K_LIMIT = 5

_VANISH_TOL = 1e-12
_CAUGHT = (ValueError, ZeroDivisionError, OverflowError)


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    subdivisions: int
    breakpoints_split: int


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    bracket_width_final: float
    iterations: int


def _checked(fn):
    def sample(x: float) -> float:
        try:
            v = fn(x)
        except _CAUGHT as exc:
            raise EvalDomainError(f"cannot evaluate integrand at {x!r}: {exc}") from None
        if not math.isfinite(v):
            raise EvalDomainError(f"non-finite integrand value {v!r} at {x!r}")
        return v

    return sample


def _checked_ratio(fn, gn):
    def sample(x: float) -> float:
        try:
            fv = fn(x)
            gv = gn(x)
        except _CAUGHT as exc:
            raise EvalDomainError(f"cannot evaluate integrand at {x!r}: {exc}") from None
        if abs(gv) <= _VANISH_TOL:
            raise EvalDomainError(f"denominator vanishes at {x!r} (value {gv!r})")
        v = fv / gv
        if not math.isfinite(v):
            raise EvalDomainError(f"non-finite integrand value {v!r} at {x!r}")
        return v

    return sample


def _adaptive_simpson(sample, a: float, b: float, tol: float):
    """Adaptive Simpson on [a, b] with an explicit interval stack.

    Each interval is accepted when the Richardson error estimate
    |S_fine - S_coarse| / 15 clears its local budget, and the accepted
    contribution includes the extrapolation term, so the reported value
    is one order better than plain Simpson.
    """
    fa, fm, fb = sample(a), sample(0.5 * (a + b)), sample(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total = 0.0
    err = 0.0
    splits = 0
    while stack:
        a0, b0, f0, f1, f2, s, budget, depth = stack.pop()
        m = 0.5 * (a0 + b0)
        lm = 0.5 * (a0 + m)
        rm = 0.5 * (m + b0)
        flm = sample(lm)
        frm = sample(rm)
        left = (m - a0) / 6.0 * (f0 + 4.0 * flm + f1)
        right = (b0 - m) / 6.0 * (f1 + 4.0 * frm + f2)
        delta = left + right - s
        if abs(delta) <= 15.0 * budget or (b0 - a0) <= 1e-15 * max(abs(a0), abs(b0), 1.0):
            total += left + right + delta / 15.0
            err += abs(delta) / 15.0
            continue
        if depth >= MAX_DEPTH:
            raise NumericsError(
                f"quadrature stalled at depth {MAX_DEPTH} near {m!r} "
                f"(local error {abs(delta) / 15.0:.3e})"
            )
        splits += 1
        half = 0.5 * budget
        stack.append((a0, m, f0, flm, f1, left, half, depth + 1))
        stack.append((m, b0, f1, frm, f2, right, half, depth + 1))
    return total, err, splits


def _cuts(lo: float, hi: float, *functions) -> list:
    points = {lo, hi}
    for f in functions:
        if f.breakpoints is not None:
            points.update(p for p in f.breakpoints if lo < p < hi)
    return sorted(points)


def _integrate_sorted(samplers, cuts, tol):
    spans = list(zip(cuts, cuts[1:]))
    budget = tol / len(spans)
    total = 0.0
    err = 0.0
    splits = 0
    for (a, b), sample in zip(spans, samplers):
        v, e, s = _adaptive_simpson(sample, a, b, budget)
        total += v
        err += e
        splits += s
    return total, err, splits


def integrate(f: ScalarFunction, a: float, b: float, tol: float = DEFAULT_QUAD_TOL) -> QuadResult:
    """Signed integral of f from a to b."""
    a, b = float(a), float(b)
    if a == b:
        return QuadResult(0.0, 0.0, 0, 0)
    lo, hi = (a, b) if a < b else (b, a)
    f.require_covers(lo, hi)
    cuts = _cuts(lo, hi, f)
    samplers = [
        _checked(f.compiled_segment(0.5 * (c0 + c1))) for c0, c1 in zip(cuts, cuts[1:])
    ]
    total, err, splits = _integrate_sorted(samplers, cuts, tol)
    if a > b:
        total = -total
    return QuadResult(total, err, splits, len(cuts) - 2)


def integrate_ratio(
    f: ScalarFunction, g: ScalarFunction, a: float, b: float, tol: float = DEFAULT_QUAD_TOL
) -> QuadResult:
    """Signed integral of f/g from a to b, split at both functions' breakpoints."""
    a, b = float(a), float(b)
    if a == b:
        return QuadResult(0.0, 0.0, 0, 0)
    lo, hi = (a, b) if a < b else (b, a)
    f.require_covers(lo, hi)
    g.require_covers(lo, hi)
    cuts = _cuts(lo, hi, f, g)
    samplers = []
    for c0, c1 in zip(cuts, cuts[1:]):
        mid = 0.5 * (c0 + c1)
        samplers.append(_checked_ratio(f.compiled_segment(mid), g.compiled_segment(mid)))
    total, err, splits = _integrate_sorted(samplers, cuts, tol)
    if a > b:
        total = -total
    return QuadResult(total, err, splits, len(cuts) - 2)


def integrate_callable(fn, a: float, b: float, tol: float = DEFAULT_QUAD_TOL) -> QuadResult:
    """Signed integral of a plain callable, assumed smooth on the interval."""
    a, b = float(a), float(b)
    if a == b:
        return QuadResult(0.0, 0.0, 0, 0)
    lo, hi = (a, b) if a < b else (b, a)
    total, err, splits = _adaptive_simpson(_checked(fn), lo, hi, tol)
    if a > b:
        total = -total
    return QuadResult(total, err, splits, 0)


def require_odd_k(k: int, limit: int = SEPARABLE_K_LIMIT) -> None:
    if not isinstance(k, int) or isinstance(k, bool):
        raise ValidationError(f"k must be an integer, got {k!r}")
    if k < 1 or k % 2 == 0:
        raise ValidationError(f"k must be a positive odd integer, got {k}")
    if k > limit:
        raise ValidationError(f"k must be at most {limit}, got {k}")


def _normalize_factors(factors, k: int, label: str):
    if factors is None:
        return None
    if isinstance(factors, ScalarFunction):
        return [factors] * k
    factors = list(factors)
    if len(factors) != k:
        raise ValidationError(f"{label} needs {k} factors, got {len(factors)}")
    return factors


def integrate_kfold(
    factors_f,
    factors_g,
    y: float,
    xi: float,
    k: int,
    tol: float = DEFAULT_QUAD_TOL,
    method: str = "separable",
    nodes: int = GAUSS_NODES,
) -> float:
    """k-fold signed integral over [y, xi]^k of a per-axis product integrand.

    Axis j carries factors_f[j] / factors_g[j] (just factors_f[j] when
    factors_g is None). A single function stands in for k identical
    factors. The separable route multiplies adaptive 1-d integrals; the
    tensor route is a fixed-order Gauss product rule kept around as an
    independent cross-check.
    """
    if method == "separable":
        require_odd_k(k, SEPARABLE_K_LIMIT)
    elif method == "tensor":
        require_odd_k(k, TENSOR_K_LIMIT)
    else:
        raise ValidationError(f"method must be separable or tensor, got {method!r}")
    fs = _normalize_factors(factors_f, k, "factors_f")
    gs = _normalize_factors(factors_g, k, "factors_g")
    if method == "separable":
        memo = {}
        product = 1.0
        for j in range(k):
            g = gs[j] if gs is not None else None
            key = (id(fs[j]), id(g))
            if key not in memo:
                if g is None:
                    memo[key] = integrate(fs[j], y, xi, tol).value
                else:
                    memo[key] = integrate_ratio(fs[j], g, y, xi, tol).value
            product *= memo[key]
        return product
    return tensor_gauss_kfold(fs, gs, y, xi, k, nodes)


def tensor_gauss_kfold(fs, gs, y: float, xi: float, k: int, nodes: int = GAUSS_NODES) -> float:
    """Gauss-Legendre product rule over the k-cube, axes split at breakpoints.

    Walks the first k-1 axes with an explicit index loop and closes the
    last axis as a weighted sum, so no k-dimensional array is ever built.
    """
    y, xi = float(y), float(xi)
    if y == xi:
        return 0.0
    lo, hi = (y, xi) if y < xi else (xi, y)
    u, w = np.polynomial.legendre.leggauss(nodes)
    axes = []
    for j in range(k):
        g = gs[j] if gs is not None else None
        cuts = _cuts(lo, hi, fs[j]) if g is None else _cuts(lo, hi, fs[j], g)
        pts = []
        wts = []
        for c0, c1 in zip(cuts, cuts[1:]):
            r = 0.5 * (c1 - c0)
            pts.append(0.5 * (c0 + c1) + r * u)
            wts.append(r * w)
        pts = np.concatenate(pts)
        wts = np.concatenate(wts)
        vals = fs[j].eval_many(pts)
        if g is not None:
            gvals = g.eval_many(pts)
            if np.min(np.abs(gvals)) <= _VANISH_TOL:
                raise EvalDomainError("denominator vanishes inside the integration cube")
            vals = vals / gvals
        axes.append(wts * vals)
    sign = 1.0 if xi >= y else -1.0
    last_sum = float(np.sum(axes[-1]))
    lead = axes[:-1]
    total = 0.0
    for idx in itertools.product(*(range(len(a)) for a in lead)):
        p = 1.0
        for a, i in zip(lead, idx):
            p *= a[i]
        total += p
    return sign**k * total * last_sum


def riemann_oracle(f: ScalarFunction, a: float, b: float, n_cells: int, g: ScalarFunction = None) -> float:
    """Midpoint-rule integral on a uniform grid, signed by the cell width.

    Deliberately naive: no adaptivity, no breakpoint alignment, nothing
    shared with the production rule. Slow convergence is the price of
    being a genuinely independent answer.
    """
    if n_cells < 1:
        raise ValidationError(f"need at least one cell, got {n_cells}")
    a, b = float(a), float(b)
    if a == b:
        return 0.0
    f.require_covers(a, b)
    if g is not None:
        g.require_covers(a, b)
    h = (b - a) / n_cells
    pts = a + (np.arange(n_cells) + 0.5) * h
    vals = f.eval_many(pts)
    if g is not None:
        gvals = g.eval_many(pts)
        if np.min(np.abs(gvals)) <= _VANISH_TOL:
            raise EvalDomainError("denominator vanishes on the sampling grid")
        vals = vals / gvals
    return h * float(np.sum(vals))


def bisect_root(
    fn,
    lo: float,
    hi: float,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
    width_tol: float = None,
) -> RootResult:
    """Find a root of fn on [lo, hi], which must bracket a sign change.

    Plain bisection alternating with a guarded secant step: the secant
    candidate is used only when it lands strictly inside the current
    bracket, so the bisection convergence guarantee survives while smooth
    problems finish in a handful of iterations. Success means either the
    residual dropped below residual_tol or the bracket collapsed below
    width_tol.
    """
    lo, hi = float(lo), float(hi)
    if not lo < hi:
        raise ValidationError(f"need lo < hi, got [{lo!r}, {hi!r}]")
    if width_tol is None:
        width_tol = 1e-12 * (hi - lo)
    f_lo = fn(lo)
    if abs(f_lo) <= residual_tol:
        return RootResult(lo, f_lo, hi - lo, 0)
    f_hi = fn(hi)
    if abs(f_hi) <= residual_tol:
        return RootResult(hi, f_hi, hi - lo, 0)
    if (f_lo > 0.0) == (f_hi > 0.0):
        raise BracketError(
            f"no sign change on [{lo!r}, {hi!r}]: endpoints {f_lo!r} and {f_hi!r}"
        )
    a, b = lo, hi
    fa, fb = f_lo, f_hi
    for iteration in range(1, MAX_ROOT_ITERATIONS + 1):
        x = 0.5 * (a + b)
        if iteration % 2 == 0 and fb != fa:
            s = (a * fb - b * fa) / (fb - fa)
            gap = 0.01 * (b - a)
            if a + gap < s < b - gap:
                x = s
        fx = fn(x)
        if abs(fx) <= residual_tol:
            return RootResult(x, fx, b - a, iteration)
        if (fx > 0.0) == (fa > 0.0):
            a, fa = x, fx
        else:
            b, fb = x, fx
        if b - a <= width_tol:
            mid = 0.5 * (a + b)
            return RootResult(mid, fn(mid), b - a, iteration + 1)
    raise NumericsError(f"root search did not converge in {MAX_ROOT_ITERATIONS} iterations")


__all__ = [
    "DEFAULT_QUAD_TOL",
    "DEFAULT_RESIDUAL_TOL",
    "GAUSS_NODES",
    "MAX_DEPTH",
    "MAX_ROOT_ITERATIONS",
    "QuadResult",
    "RootResult",
    "bisect_root",
    "integrate",
    "integrate_callable",
    "integrate_kfold",
    "integrate_ratio",
    "require_odd_k",
    "riemann_oracle",
    "tensor_gauss_kfold",
]
