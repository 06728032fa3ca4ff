"""Inequality checks organized around the balance functional.

Everything here revolves around one object: F(y) = sum over blocks of the
k-fold integral of f/g from y to x_i. F starts non-negative at the
smallest abscissa, ends non-positive at the largest, and its root x0 is
the equilibrium point. The checks then compare integral expressions
evaluated at x0 (or at a caller-chosen point) and report a margin against
a one-sided tolerance. Margins are always lhs - rhs; a nonincreasing
weight g reverses which sign counts as satisfied.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import NumericsError, ValidationError
from .funcexpr.checks import (
    check_derivative_positivity,
    classify_monotonicity,
    require_positive,
)
from .funcexpr.piecewise import ScalarFunction
from .numerics import (
    DEFAULT_QUAD_TOL,
    DEFAULT_RESIDUAL_TOL,
    SEPARABLE_K_LIMIT,
    RootResult,
    bisect_root,
    integrate_callable,
    integrate_kfold,
)

DEFAULT_VERDICT_TOL = 1e-8
JENSEN_CONSISTENCY_TOL = 1e-8


class BlockSystem:
    """Sorted positive abscissas, each paired with a positive capacity.

    Accepts one shared ScalarFunction or a sequence with one entry per
    block. Construction sorts the abscissas (capacities permuted along)
    and validates positivity of every capacity, over its own domain when
    bounded and over the abscissa hull otherwise.
    """

    def __init__(self, xs, capacities):
        points = [float(x) for x in xs]
        if not points:
            raise ValidationError("a block system needs at least one block")
        for x in points:
            if not (math.isfinite(x) and x > 0.0):
                raise ValidationError(f"abscissas must be positive reals, got {x!r}")
        if isinstance(capacities, ScalarFunction):
            caps = [capacities] * len(points)
            shared = True
        else:
            caps = list(capacities)
            shared = False
            if len(caps) != len(points):
                raise ValidationError(
                    f"{len(points)} blocks need {len(points)} capacities, got {len(caps)}"
                )
            for f in caps:
                if not isinstance(f, ScalarFunction):
                    raise ValidationError(f"capacities must be ScalarFunction, got {type(f).__name__}")
        order = sorted(range(len(points)), key=points.__getitem__)
        self.xs = tuple(points[i] for i in order)
        caps = [caps[i] for i in order]
        hull = (self.xs[0], self.xs[-1])
        checked = []
        for f in caps:
            if f.breakpoints is not None:
                require_positive(f, None, label="capacity")
            elif hull[0] < hull[1]:
                require_positive(f, hull, label="capacity")
            elif f.eval(hull[0]) <= 0.0:
                raise ValidationError(f"capacity must be positive at {hull[0]!r}")
            checked.append(f if f.declared_positive else replace(f, declared_positive=True))
        self.capacities = tuple(checked)
        self.shared = shared

    def __len__(self) -> int:
        return len(self.xs)

    @property
    def hull(self):
        return (self.xs[0], self.xs[-1])

    def __repr__(self):
        kind = "shared" if self.shared else "per-block"
        return f"BlockSystem(n={len(self.xs)}, xs={self.xs!r}, {kind} capacities)"


@dataclass(frozen=True)
class EquilibriumResult:
    x0: float
    residual: float
    bracket: tuple
    iterations: int


@dataclass(frozen=True)
class InequalityReport:
    theorem_id: str
    lhs: float
    rhs: float
    margin: float
    tolerance: float
    satisfied: bool
    direction_flipped: bool
    k: int = 1
    x0: float | None = None


@dataclass(frozen=True)
class CounterexampleReport:
    x1: float
    x2: float
    coefficients: tuple
    discriminant: float
    has_real_root: bool


def _report(theorem_id, k, x0, lhs, rhs, flipped, tol) -> InequalityReport:
    margin = lhs - rhs
    satisfied = (margin <= tol) if flipped else (margin >= -tol)
    return InequalityReport(theorem_id, lhs, rhs, margin, tol, satisfied, flipped, k, x0)


def _check_k(k) -> None:
    if not isinstance(k, int) or isinstance(k, bool):
        raise ValidationError(f"k must be an integer, got {k!r}")
    if k % 2 == 0:
        raise ValidationError(
            f"k = {k} is rejected: the result does not hold for even values of k"
        )
    if k < 1:
        raise ValidationError(f"k must be positive, got {k}")
    if k > SEPARABLE_K_LIMIT:
        raise ValidationError(f"k must be at most {SEPARABLE_K_LIMIT}, got {k}")


def _check_exponent(value, name) -> None:
    v = float(value)
    if not math.isfinite(v):
        raise ValidationError(f"{name} must be a finite real, got {value!r}")
    if v in (0.0, -1.0):
        raise ValidationError(
            f"{name} = {v} is excluded: the final form of the result changes at 0 and -1"
        )


def _balance_root(xs, functional, residual_tol, quad_tol) -> RootResult:
    """Root of a balance functional over the hull of xs.

    The sign conditions F(lo) >= 0 >= F(hi) are part of the theory; they
    are asserted up front with slack for accumulated quadrature error, so
    a violation surfaces as a numerics failure instead of a bogus
    bracket error from the root finder.
    """
    lo, hi = min(xs), max(xs)
    if lo == hi:
        return RootResult(lo, 0.0, 0.0, 0)
    slack = max(residual_tol, 64.0 * quad_tol * len(xs))
    f_lo = functional(lo)
    if f_lo < -slack:
        raise NumericsError(
            f"balance functional should be non-negative at {lo!r}, got {f_lo!r}"
        )
    f_hi = functional(hi)
    if f_hi > slack:
        raise NumericsError(
            f"balance functional should be non-positive at {hi!r}, got {f_hi!r}"
        )
    if f_lo <= 0.0:
        return RootResult(lo, f_lo, hi - lo, 0)
    if f_hi >= 0.0:
        return RootResult(hi, f_hi, hi - lo, 0)
    return bisect_root(functional, lo, hi, residual_tol=residual_tol)


def _validate_shared(sys: BlockSystem, g: ScalarFunction, k: int):
    """Common preconditions for the shared-capacity checks.

    Returns the monotone direction of g, or None when the abscissa hull
    is a single point and direction cannot matter.
    """
    _check_k(k)
    if not sys.shared:
        raise ValidationError("this check needs one shared capacity function")
    lo, hi = sys.hull
    if lo == hi:
        if g.eval(lo) <= 0.0:
            raise ValidationError(f"weight g must be positive at {lo!r}")
        return None
    require_positive(g, (lo, hi), label="weight g")
    return classify_monotonicity(g, (lo, hi))


def _equilibrium(sys, g, k, residual_tol, quad_tol) -> EquilibriumResult:
    f = sys.capacities[0]

    def functional(y):
        return math.fsum(integrate_kfold(f, g, y, x, k, tol=quad_tol) for x in sys.xs)

    root = _balance_root(sys.xs, functional, residual_tol, quad_tol)
    return EquilibriumResult(root.root, root.residual, sys.hull, root.iterations)


def solve_equilibrium(
    sys: BlockSystem,
    g: ScalarFunction,
    k: int = 1,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
    quad_tol: float = DEFAULT_QUAD_TOL,
) -> EquilibriumResult:
    """Find x0 with sum over blocks of (integral of f/g from x0 to x_i)^k = 0."""
    _validate_shared(sys, g, k)
    return _equilibrium(sys, g, k, residual_tol, quad_tol)


def verify_reversible(
    sys: BlockSystem,
    g: ScalarFunction,
    k: int = 1,
    tol: float = DEFAULT_VERDICT_TOL,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
    quad_tol: float = DEFAULT_QUAD_TOL,
    equilibrium: EquilibriumResult = None,
) -> InequalityReport:
    """At the equilibrium point, the plain f integrals sum to the g-favored side.

    lhs is sum over blocks of (integral of f from x0 to x_i)^k, compared
    against zero: at least zero for nondecreasing g, at most zero for
    nonincreasing g. Pass a precomputed equilibrium to skip re-solving.
    """
    direction = _validate_shared(sys, g, k)
    eq = equilibrium if equilibrium is not None else _equilibrium(sys, g, k, residual_tol, quad_tol)
    f = sys.capacities[0]
    lhs = math.fsum(integrate_kfold(f, None, eq.x0, x, k, tol=quad_tol) for x in sys.xs)
    flipped = direction == "nonincreasing"
    return _report("reversible", k, eq.x0, lhs, 0.0, flipped, tol)


def verify_irreversible(
    sys: BlockSystem,
    g: ScalarFunction,
    x0: float,
    k: int = 1,
    tol: float = DEFAULT_VERDICT_TOL,
    quad_tol: float = DEFAULT_QUAD_TOL,
) -> InequalityReport:
    """Compare the f integrals scaled by g at x0 against the f/g integrals.

    x0 is any positive point, inside the abscissa hull or not. Capacities
    may differ per block; each is validated over the interval it is
    actually integrated on.
    """
    _check_k(k)
    x0 = float(x0)
    if not (math.isfinite(x0) and x0 > 0.0):
        raise ValidationError(f"x0 must be a positive real, got {x0!r}")
    for x, f in zip(sys.xs, sys.capacities):
        lo, hi = min(x0, x), max(x0, x)
        if lo < hi:
            require_positive(f, (lo, hi), label="capacity")
    g_lo, g_hi = min(x0, sys.xs[0]), max(x0, sys.xs[-1])
    if g_lo < g_hi:
        require_positive(g, (g_lo, g_hi), label="weight g")
        direction = classify_monotonicity(g, (g_lo, g_hi))
    else:
        if g.eval(x0) <= 0.0:
            raise ValidationError(f"weight g must be positive at {x0!r}")
        direction = "nondecreasing"
    g_at_x0 = g.eval(x0)
    lhs = math.fsum(
        integrate_kfold(f, None, x0, x, k, tol=quad_tol) for x, f in zip(sys.xs, sys.capacities)
    ) / g_at_x0**k
    rhs = math.fsum(
        integrate_kfold(f, g, x0, x, k, tol=quad_tol) for x, f in zip(sys.xs, sys.capacities)
    )
    flipped = direction == "nonincreasing"
    return _report("irreversible", k, x0, lhs, rhs, flipped, tol)


def even_k_counterexample(x1: float, x2: float) -> CounterexampleReport:
    """The k=2 balance polynomial and its discriminant.

    With two blocks and unit f and g, an even exponent turns the balance
    functional into 2y^2 - 2(x1+x2)y + (x1^2+x2^2), whose discriminant is
    -4(x1-x2)^2: no real root unless the abscissas coincide, so no
    equilibrium point exists and the even-k analogue of the result dies
    here.
    """
    x1, x2 = float(x1), float(x2)
    for v in (x1, x2):
        if not (math.isfinite(v) and v > 0.0):
            raise ValidationError(f"abscissas must be positive reals, got {v!r}")
    a = 2.0
    b = -2.0 * (x1 + x2)
    c = x1 * x1 + x2 * x2
    disc = b * b - 4.0 * a * c
    return CounterexampleReport(x1, x2, (a, b, c), disc, disc >= 0.0)


def jensen_verify(
    h: ScalarFunction,
    ys,
    tol: float = DEFAULT_VERDICT_TOL,
    quad_tol: float = DEFAULT_QUAD_TOL,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
    consistency_tol: float = JENSEN_CONSISTENCY_TOL,
) -> InequalityReport:
    """Mean of h(y_j) against h of the mean, for increasing convex h.

    The margin is computed twice: directly, and through the balance
    machinery with f = g = h' (so the equilibrium point must land on the
    arithmetic mean). The two must agree to consistency_tol, otherwise
    something is wrong with the numerics and we refuse to report.
    """
    points = [float(y) for y in ys]
    if not points:
        raise ValidationError("need at least one point")
    for y in points:
        if not (math.isfinite(y) and y > 0.0):
            raise ValidationError(f"points must be positive reals, got {y!r}")
    m = len(points)
    mean = math.fsum(points) / m
    lo, hi = min(points), max(points)
    if lo == hi:
        jet = h.eval_jet(lo)
        if jet.d1 <= 0.0 or jet.d2 <= 0.0:
            raise ValidationError(
                f"h needs positive first and second derivatives, got "
                f"{jet.d1!r} and {jet.d2!r} at {lo!r}"
            )
        value = h.eval(lo)
        return _report("jensen", 1, lo, value, value, False, tol)
    for order in (1, 2):
        rep = check_derivative_positivity(h, (lo, hi), order=order)
        if not rep.verdict:
            raise ValidationError(
                f"h needs a positive derivative of order {order}; worst sample "
                f"{rep.worst_value!r} at {rep.worst_point!r}"
            )

    def slope(t):
        return h.eval_jet(t).d1

    def unit_ratio(t):
        v = slope(t)
        return v / v

    def functional(y):
        return math.fsum(integrate_callable(unit_ratio, y, p, quad_tol).value for p in points)

    root = _balance_root(points, functional, residual_tol, quad_tol)
    x0 = root.root
    if abs(x0 - mean) > consistency_tol:
        raise NumericsError(
            f"equilibrium point {x0!r} disagrees with the arithmetic mean {mean!r}"
        )
    route_lhs = math.fsum(integrate_callable(slope, x0, p, quad_tol).value for p in points)
    route_margin = route_lhs / m
    direct_lhs = math.fsum(h.eval(p) for p in points) / m
    direct_rhs = h.eval(mean)
    direct_margin = direct_lhs - direct_rhs
    if abs(route_margin - direct_margin) > consistency_tol:
        raise NumericsError(
            f"margin routes disagree: integral route {route_margin!r} vs "
            f"direct evaluation {direct_margin!r}"
        )
    return _report("jensen", 1, x0, direct_lhs, direct_rhs, False, tol)


def powermean_solve(
    xs,
    b: float,
    k: int = 1,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
) -> float:
    """The generalized power mean: root of sum of (x_i^b - y^b)^k over [min, max]."""
    _check_k(k)
    _check_exponent(b, "b")
    points = [float(x) for x in xs]
    if not points:
        raise ValidationError("need at least one point")
    for x in points:
        if not (math.isfinite(x) and x > 0.0):
            raise ValidationError(f"points must be positive reals, got {x!r}")
    lo, hi = min(points), max(points)
    if lo == hi:
        return lo
    b = float(b)

    def balance(y):
        return math.fsum((x**b - y**b) ** k for x in points)

    return bisect_root(balance, lo, hi, residual_tol=residual_tol).root


def powermean_verify(
    xs,
    a: float,
    b: float,
    k: int = 1,
    tol: float = DEFAULT_VERDICT_TOL,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
) -> InequalityReport:
    """Power comparison at the b-mean: sum of (x_i^a - x0^a)^k against zero.

    Non-negative when a >= b, non-positive when a <= b; the direction
    flag is set for a < b.
    """
    _check_exponent(a, "a")
    x0 = powermean_solve(xs, b, k, residual_tol)
    a = float(a)
    lhs = math.fsum((float(x) ** a - x0**a) ** k for x in xs)
    flipped = a < float(b)
    return _report("powermean", k, x0, lhs, 0.0, flipped, tol)


__all__ = [
    "DEFAULT_VERDICT_TOL",
    "BlockSystem",
    "CounterexampleReport",
    "EquilibriumResult",
    "InequalityReport",
    "even_k_counterexample",
    "jensen_verify",
    "powermean_solve",
    "powermean_verify",
    "solve_equilibrium",
    "verify_reversible",
    "verify_irreversible",
]
