"""Random function families for the randomized suites.

Drawing functions as expression text and feeding them through the parser
keeps the whole pipeline honest: whatever the suites exercise is exactly
what a scenario file could contain. Every family is normalized so values
stay roughly within [0.2, 6] on the requested interval regardless of how
wide it is; without that, k-fold products on temperature-sized intervals
blow past any absolute tolerance and the suites measure nothing.
"""

from __future__ import annotations

import math

from .errors import ValidationError
from .funcexpr.grammar import parse
from .funcexpr.piecewise import ScalarFunction, parse_function


def _fmt(v: float) -> str:
    return repr(float(v))


def _const(rng, lo, hi):
    return _fmt(rng.uniform(0.3, 4.0))


def _affine(rng, lo, hi):
    c0 = rng.uniform(0.4, 2.0)
    c1 = rng.uniform(-(c0 - 0.25) / hi, (5.0 - c0) / hi)
    return f"{_fmt(c0)} + {_fmt(c1)}*x"


def _quadratic(rng, lo, hi):
    s = rng.uniform(lo, hi)
    reach = max(hi - s, s - lo, 1e-6)
    amp = rng.uniform(0.1, 3.0) / (reach * reach)
    c = rng.uniform(0.25, 1.5)
    return f"{_fmt(amp)}*(x - {_fmt(s)})^2 + {_fmt(c)}"


def _exp_decay(rng, lo, hi):
    r = rng.uniform(0.2, 3.0) / hi
    c = rng.uniform(0.5, 3.0)
    d = rng.uniform(0.25, 1.0)
    return f"{_fmt(c)}*exp(-{_fmt(r)}*x) + {_fmt(d)}"


def _exp_growth(rng, lo, hi):
    c = rng.uniform(0.3, 1.5)
    r = rng.uniform(0.1, 1.0) * math.log(5.0 / c) / hi
    return f"{_fmt(c)}*exp({_fmt(r)}*x)"


def _reciprocal(rng, lo, hi):
    d = rng.uniform(0.5, 2.0) * hi
    c = rng.uniform(0.25, 1.0) * (hi + d)
    return f"{_fmt(c)}/(x + {_fmt(d)})"


def _sqrt_up(rng, lo, hi):
    c = rng.uniform(0.3, 4.5) / math.sqrt(hi)
    d = rng.uniform(0.25, 1.0)
    return f"{_fmt(c)}*sqrt(x) + {_fmt(d)}"


def _log_up(rng, lo, hi):
    c = rng.uniform(0.2, 4.0) / math.log(hi + 2.0)
    d = rng.uniform(0.25, 1.0)
    return f"{_fmt(c)}*log(x + 2.0) + {_fmt(d)}"


_POSITIVE = (
    _const,
    _affine,
    _quadratic,
    _exp_decay,
    _exp_growth,
    _reciprocal,
    _sqrt_up,
    _log_up,
)


def _step_function(rng, lo, hi) -> ScalarFunction:
    while True:
        cuts = sorted(rng.uniform(lo, hi) for _ in range(rng.randint(1, 3)))
        bps = [lo] + cuts + [hi]
        if all(b1 - b0 > 1e-6 * (hi - lo) for b0, b1 in zip(bps, bps[1:])):
            break
    segments = tuple(parse(_fmt(rng.uniform(0.3, 5.0))) for _ in range(len(bps) - 1))
    return ScalarFunction(segments, tuple(bps), declared_positive=True)


def draw_positive_function(rng, lo, hi, allow_steps: bool = False) -> ScalarFunction:
    """A positive function usable as a capacity on [lo, hi].

    Smooth draws come back with an unbounded domain, so they remain legal
    when an integration range later pokes past [lo, hi]. Step draws (when
    allowed) are pinned to [lo, hi] by construction.
    """
    lo, hi = float(lo), float(hi)
    if not 0.0 < lo < hi:
        raise ValidationError(f"need 0 < lo < hi, got [{lo!r}, {hi!r}]")
    if allow_steps and rng.random() < 0.25:
        return _step_function(rng, lo, hi)
    text = rng.choice(_POSITIVE)(rng, lo, hi)
    return parse_function(text, declared_positive=True)


def _up_linear(rng, lo, hi):
    c0 = rng.uniform(0.25, 1.0)
    r = rng.uniform(0.5, 4.5) / (hi - lo)
    return f"{_fmt(c0)} + {_fmt(r)}*(x - {_fmt(lo)})"


def _up_exp(rng, lo, hi):
    c = rng.uniform(0.3, 1.5)
    r = rng.uniform(0.3, 1.0) * math.log(5.0 / c) / hi
    return f"{_fmt(c)}*exp({_fmt(r)}*x)"


def _up_sqrt(rng, lo, hi):
    c = rng.uniform(0.5, 4.5) / math.sqrt(hi)
    d = rng.uniform(0.25, 1.0)
    return f"{_fmt(c)}*sqrt(x) + {_fmt(d)}"


def _up_log(rng, lo, hi):
    c = rng.uniform(0.5, 4.0) / math.log(hi + 2.0)
    d = rng.uniform(0.25, 1.0)
    return f"{_fmt(c)}*log(x + 2.0) + {_fmt(d)}"


def _up_saturating(rng, lo, hi):
    e = rng.uniform(0.2, 1.0) * hi
    d = rng.uniform(0.5, 2.0) * (lo + e)
    c = rng.uniform(0.3, 2.0) + d / (lo + e)
    return f"{_fmt(c)} - {_fmt(d)}/(x + {_fmt(e)})"


def _down_linear(rng, lo, hi):
    c_end = rng.uniform(0.25, 1.0)
    r = rng.uniform(0.5, 4.5) / (hi - lo)
    return f"{_fmt(c_end)} + {_fmt(r)}*({_fmt(hi)} - x)"


def _down_exp(rng, lo, hi):
    r = rng.uniform(0.3, 3.0) / hi
    c = rng.uniform(0.5, 3.0)
    d = rng.uniform(0.25, 1.0)
    return f"{_fmt(c)}*exp(-{_fmt(r)}*x) + {_fmt(d)}"


def _down_reciprocal(rng, lo, hi):
    return _reciprocal(rng, lo, hi)


def _down_inv_sqrt(rng, lo, hi):
    c = rng.uniform(0.3, 2.0) * math.sqrt(lo)
    d = rng.uniform(0.25, 1.0)
    return f"{_fmt(c)}/sqrt(x) + {_fmt(d)}"


def _down_log(rng, lo, hi):
    c = rng.uniform(0.2, 1.5) / math.log(hi + 2.0)
    c0 = c * math.log(hi + 2.0) + rng.uniform(0.25, 1.0)
    return f"{_fmt(c0)} - {_fmt(c)}*log(x + 2.0)"


_NONDECREASING = (_up_linear, _up_exp, _up_sqrt, _up_log, _up_saturating)
_NONINCREASING = (_down_linear, _down_exp, _down_reciprocal, _down_inv_sqrt, _down_log)


def draw_monotone_function(rng, lo, hi, direction: str | None = None) -> ScalarFunction:
    """A strictly monotone positive weight function on [lo, hi].

    Strict slopes bounded away from zero on purpose: constants would make
    the direction flag meaningless and the flip checks vacuous.
    """
    lo, hi = float(lo), float(hi)
    if not 0.0 < lo < hi:
        raise ValidationError(f"need 0 < lo < hi, got [{lo!r}, {hi!r}]")
    if direction is None:
        direction = rng.choice(("nondecreasing", "nonincreasing"))
    if direction == "nondecreasing":
        text = rng.choice(_NONDECREASING)(rng, lo, hi)
    elif direction == "nonincreasing":
        text = rng.choice(_NONINCREASING)(rng, lo, hi)
    else:
        raise ValidationError(f"unknown direction {direction!r}")
    return parse_function(text, declared_positive=True, declared_monotonicity=direction)


def draw_abscissas(rng, n: int, lo: float, hi: float) -> tuple:
    """n sorted sample points in [lo, hi]."""
    if n < 1:
        raise ValidationError(f"need at least one point, got {n}")
    return tuple(sorted(rng.uniform(lo, hi) for _ in range(n)))


__all__ = [
    "draw_abscissas",
    "draw_monotone_function",
    "draw_positive_function",
]
