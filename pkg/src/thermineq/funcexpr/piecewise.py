"""Piecewise scalar functions of one variable.

A ScalarFunction is a sequence of expression segments laid over a grid of
breakpoints. Segments are right continuous: segment j governs
[b_j, b_{j+1}), and the last one also owns the right endpoint. When no
breakpoints are given the single segment extends over the whole real
line, which is the common case for smooth formulas like `exp(x)`.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, EvalDomainError, ValidationError
from .grammar import compile_node, parse, to_text

_CAUGHT = (ValueError, ZeroDivisionError, OverflowError)


@dataclass(frozen=True)
class ScalarFunction:
    segments: tuple
    breakpoints: tuple | None = None
    declared_positive: bool = False
    declared_monotonicity: str | None = None
    _evals: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.segments:
            raise ValidationError("a function needs at least one segment")
        if self.breakpoints is None:
            if len(self.segments) != 1:
                raise ValidationError("multiple segments require breakpoints")
        else:
            bps = self.breakpoints
            if len(bps) != len(self.segments) + 1:
                raise ValidationError(
                    f"{len(self.segments)} segments need {len(self.segments) + 1} "
                    f"breakpoints, got {len(bps)}"
                )
            if bps[0] <= 0.0:
                raise ValidationError(f"breakpoints must be positive, got {bps[0]!r}")
            for a, b in zip(bps, bps[1:]):
                if not a < b:
                    raise ValidationError(
                        f"breakpoints must be strictly increasing, got {a!r} then {b!r}"
                    )
        object.__setattr__(self, "_evals", tuple(compile_node(s) for s in self.segments))

    @property
    def lower(self) -> float | None:
        return None if self.breakpoints is None else self.breakpoints[0]

    @property
    def upper(self) -> float | None:
        return None if self.breakpoints is None else self.breakpoints[-1]

    def segment_index(self, x: float) -> int:
        if self.breakpoints is None:
            return 0
        bps = self.breakpoints
        if x < bps[0] or x > bps[-1]:
            raise DomainError(f"point {x!r} outside domain [{bps[0]!r}, {bps[-1]!r}]")
        return min(bisect_right(bps, x) - 1, len(self.segments) - 1)

    def compiled_segment(self, x: float):
        return self._evals[self.segment_index(x)]

    def eval(self, x: float) -> float:
        fn = self._evals[self.segment_index(x)]
        try:
            v = fn(float(x))
        except _CAUGHT as exc:
            raise EvalDomainError(f"cannot evaluate at {x!r}: {exc}") from None
        if not math.isfinite(v):
            raise EvalDomainError(f"non-finite value {v!r} at {x!r}")
        return v

    def _apply_many(self, xs: np.ndarray, lift) -> np.ndarray:
        """Vectorized application of lift(segment_fn, points), segment by segment."""
        xs = np.asarray(xs, dtype=float)
        if xs.ndim != 1:
            raise ValidationError("expected a 1-d array of points")
        if self.breakpoints is None:
            with np.errstate(all="ignore"):
                return lift(self._evals[0], xs)
        bps = np.asarray(self.breakpoints)
        if xs.size == 0:
            with np.errstate(all="ignore"):
                return lift(self._evals[0], xs)
        if xs.min() < bps[0] or xs.max() > bps[-1]:
            raise DomainError(f"points outside domain [{bps[0]!r}, {bps[-1]!r}]")
        idx = np.minimum(np.searchsorted(bps, xs, side="right") - 1, len(self.segments) - 1)
        idx = np.maximum(idx, 0)
        out = None
        with np.errstate(all="ignore"):
            for j, fn in enumerate(self._evals):
                mask = idx == j
                if mask.any():
                    part = lift(fn, xs[mask])
                    if out is None:
                        out = np.empty(part.shape[:-1] + xs.shape, dtype=float)
                    out[..., mask] = part
        return out

    def values_unchecked(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized values with no finiteness screening. Grid checks use this."""
        return self._apply_many(xs, lambda fn, pts: np.asarray(fn(pts), dtype=float) + 0.0 * pts)

    def jet_values_unchecked(self, xs: np.ndarray) -> np.ndarray:
        """Stacked (value, d1, d2) rows over a grid, unscreened."""
        from . import jets

        def lift(fn, pts):
            j = fn(jets.Jet.variable(pts))
            if not isinstance(j, jets.Jet):
                j = jets.Jet.lift(j, like=pts)
            rows = [np.asarray(part, dtype=float) + 0.0 * pts for part in (j.val, j.d1, j.d2)]
            return np.stack(rows)

        return self._apply_many(xs, lift)

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        """Vectorized evaluation over a 1-d array of points."""
        out = self.values_unchecked(xs)
        if not np.all(np.isfinite(out)):
            xs = np.asarray(xs, dtype=float)
            bad = xs[~np.isfinite(out)]
            raise EvalDomainError(f"non-finite values at {bad[:3].tolist()!r}...")
        return out

    def eval_jet(self, x: float):
        """Value with first and second derivatives at x."""
        from . import jets

        fn = self._evals[self.segment_index(x)]
        try:
            j = fn(jets.Jet.variable(float(x)))
        except _CAUGHT as exc:
            raise EvalDomainError(f"cannot differentiate at {x!r}: {exc}") from None
        if not isinstance(j, jets.Jet):
            j = jets.Jet.lift(j)
        for part in (j.val, j.d1, j.d2):
            if not math.isfinite(part):
                raise EvalDomainError(f"non-finite derivative data at {x!r}")
        return j

    def require_covers(self, a: float, b: float) -> None:
        if self.breakpoints is None:
            return
        lo, hi = min(a, b), max(a, b)
        if lo < self.breakpoints[0] or hi > self.breakpoints[-1]:
            raise DomainError(
                f"interval [{lo!r}, {hi!r}] not covered by domain "
                f"[{self.breakpoints[0]!r}, {self.breakpoints[-1]!r}]"
            )

    def spans(self, a: float, b: float):
        """Split [a, b] (a <= b) at interior breakpoints.

        Yields (lo, hi, fn) triples where fn is the compiled segment that
        governs the open interior of the span, so endpoint evaluation on
        the wrong side of a jump never happens.
        """
        if a > b:
            raise ValidationError("spans expects a <= b")
        self.require_covers(a, b)
        cuts = [a]
        if self.breakpoints is not None:
            cuts.extend(p for p in self.breakpoints if a < p < b)
        cuts.append(b)
        out = []
        for lo, hi in zip(cuts, cuts[1:]):
            fn = self._evals[self.segment_index(0.5 * (lo + hi))]
            out.append((lo, hi, fn))
        return out

    def text(self) -> str:
        return " | ".join(to_text(s) for s in self.segments)


def parse_function(
    text: str,
    breakpoints=None,
    declared_positive: bool = False,
    declared_monotonicity: str | None = None,
) -> ScalarFunction:
    """Parse one expression, optionally replicated across a breakpoint grid."""
    node = parse(text)
    if breakpoints is None:
        segments = (node,)
        bps = None
    else:
        bps = tuple(float(b) for b in breakpoints)
        if len(bps) < 2:
            raise ValidationError("need at least two breakpoints")
        segments = (node,) * (len(bps) - 1)
    return ScalarFunction(segments, bps, declared_positive, declared_monotonicity)


def parse_piecewise(entries, declared_positive=False, declared_monotonicity=None) -> ScalarFunction:
    """Build a function from [{"from": b0, "expr": e0}, ..., {"to": bm}] records."""
    if len(entries) < 2:
        raise ValidationError("piecewise spec needs at least one segment and a closing bound")
    *specs, tail = entries
    if not isinstance(tail, dict) or set(tail) != {"to"}:
        raise ValidationError('piecewise spec must end with a {"to": bound} record')
    segments = []
    bps = []
    for rec in specs:
        if not isinstance(rec, dict) or set(rec) != {"from", "expr"}:
            raise ValidationError(f'segment records need "from" and "expr" keys, got {rec!r}')
        bps.append(float(rec["from"]))
        segments.append(parse(str(rec["expr"])))
    bps.append(float(tail["to"]))
    return ScalarFunction(tuple(segments), tuple(bps), declared_positive, declared_monotonicity)


def constant_function(value: float, breakpoints=None) -> ScalarFunction:
    return parse_function(repr(float(value)), breakpoints)


def eval_function(f: ScalarFunction, x: float) -> float:
    return f.eval(x)


def derivative(f: ScalarFunction, x: float, order: int = 1) -> float:
    """Exact derivative at x via jets. Refuses breakpoints, where it is ambiguous."""
    if order not in (1, 2):
        raise ValidationError(f"derivative order must be 1 or 2, got {order!r}")
    if f.breakpoints is not None and any(x == b for b in f.breakpoints):
        raise ValidationError(f"derivative undefined at breakpoint {x!r}")
    j = f.eval_jet(x)
    return j.d1 if order == 1 else j.d2


__all__ = [
    "ScalarFunction",
    "parse_function",
    "parse_piecewise",
    "constant_function",
    "eval_function",
    "derivative",
]
