"""Equilibrium solving and the inequality checks, pinned to closed forms.

Where a case has no closed form (the k = 3 power mean), the expected root
comes from a sign-scan bisection oracle written inline, independent of the
solver under test.
"""

import math
import random

import pytest

from thermineq.errors import ValidationError
from thermineq.families import (
    draw_abscissas,
    draw_monotone_function,
    draw_positive_function,
)
from thermineq.funcexpr import parse_function
from thermineq.numerics import integrate_ratio
from thermineq.theorems import (
    BlockSystem,
    CounterexampleReport,
    InequalityReport,
    even_k_counterexample,
    jensen_verify,
    powermean_solve,
    powermean_verify,
    solve_equilibrium,
    verify_irreversible,
    verify_reversible,
)

ONE = parse_function("1")
X = parse_function("x")


# ------------------------------------------------------------- equilibrium


def test_amgm_equilibrium_is_geometric_mean():
    eq = solve_equilibrium(BlockSystem([1.0, 4.0], ONE), X)
    assert eq.x0 == pytest.approx(2.0, abs=1e-10)
    assert abs(eq.residual) <= 1e-10


def test_linear_capacity_equilibrium_is_arithmetic_mean():
    eq = solve_equilibrium(BlockSystem([1.0, 3.0], X), X)
    assert eq.x0 == pytest.approx(2.0, abs=1e-10)


def test_degenerate_system_short_circuits():
    eq = solve_equilibrium(BlockSystem([2.5, 2.5, 2.5], ONE), X)
    assert eq.x0 == 2.5
    assert eq.residual == 0.0
    assert eq.iterations == 0


def test_equilibrium_stays_in_hull():
    rng = random.Random(11)
    for _ in range(25):
        xs = draw_abscissas(rng, rng.randint(2, 5), 0.5, 6.0)
        f = draw_positive_function(rng, 0.45, 6.05)
        eq = solve_equilibrium(BlockSystem(xs, f), X)
        assert xs[0] <= eq.x0 <= xs[-1]


def test_equilibrium_zeroes_reconstructed_balance():
    rng = random.Random(17)
    for _ in range(10):
        xs = draw_abscissas(rng, 3, 0.5, 6.0)
        f = draw_positive_function(rng, 0.45, 6.05)
        eq = solve_equilibrium(BlockSystem(xs, f), X)
        balance = math.fsum(integrate_ratio(f, X, eq.x0, x).value for x in xs)
        assert abs(balance) <= 1e-8


# -------------------------------------------------------------- reversible


def test_amgm_margin():
    report = verify_reversible(BlockSystem([1.0, 4.0], ONE), X)
    assert isinstance(report, InequalityReport)
    assert report.x0 == pytest.approx(2.0, abs=1e-8)
    assert report.margin == pytest.approx(1.0, abs=1e-7)
    assert not report.direction_flipped
    assert report.satisfied


def test_equal_blocks_zero_margin():
    report = verify_reversible(BlockSystem([3.0, 3.0], ONE), X)
    assert report.margin == pytest.approx(0.0, abs=1e-9)
    assert report.satisfied


def test_decreasing_g_flips_direction():
    g = parse_function(
        "1/x", declared_positive=True, declared_monotonicity="nonincreasing"
    )
    report = verify_reversible(BlockSystem([1.0, 4.0], ONE), g)
    x0 = math.sqrt(8.5)
    assert report.x0 == pytest.approx(x0, abs=1e-8)
    assert report.direction_flipped
    assert report.margin == pytest.approx(5.0 - 2.0 * x0, abs=1e-7)
    assert report.margin < 0.0
    assert report.satisfied


def test_reversible_k3_holds():
    report = verify_reversible(BlockSystem([1.0, 4.0], ONE), X, k=3)
    assert report.k == 3
    assert report.satisfied


def test_reversible_reuses_given_equilibrium():
    sys = BlockSystem([1.0, 4.0], ONE)
    eq = solve_equilibrium(sys, X)
    report = verify_reversible(sys, X, equilibrium=eq)
    assert report.x0 == eq.x0


def test_even_k_rejected_with_verdict_message():
    with pytest.raises(ValidationError, match="does not hold for even values of k"):
        verify_reversible(BlockSystem([1.0, 4.0], ONE), X, k=2)


def test_per_block_capacities_rejected_for_shared_checks():
    sys = BlockSystem([1.0, 4.0], [ONE, X])
    with pytest.raises(ValidationError, match="one shared capacity function"):
        verify_reversible(sys, X)


# ------------------------------------------------------------ irreversible


def test_irreversible_inside_hull():
    report = verify_irreversible(BlockSystem([1.0, 4.0], ONE), X, 2.0)
    assert report.lhs == pytest.approx(0.5, abs=1e-9)
    assert report.rhs == pytest.approx(0.0, abs=1e-9)
    assert report.satisfied


def test_irreversible_outside_hull():
    report = verify_irreversible(BlockSystem([1.0, 4.0], ONE), X, 10.0)
    assert report.lhs == pytest.approx(-1.5, abs=1e-9)
    assert report.rhs == pytest.approx(math.log(0.1) + math.log(0.4), abs=1e-9)
    assert report.satisfied


def test_irreversible_at_a_block_temperature():
    report = verify_irreversible(BlockSystem([1.0, 4.0], ONE), X, 1.0)
    assert report.lhs == pytest.approx(3.0, abs=1e-9)
    assert report.rhs == pytest.approx(math.log(4.0), abs=1e-9)
    assert report.satisfied


def test_irreversible_per_block_capacities():
    report = verify_irreversible(BlockSystem([1.0, 4.0], [ONE, X]), X, 2.0)
    assert report.lhs == pytest.approx(2.5, abs=1e-9)
    assert report.rhs == pytest.approx(2.0 - math.log(2.0), abs=1e-9)
    assert report.margin == pytest.approx(0.5 + math.log(2.0), abs=1e-8)
    assert report.satisfied


def test_irreversible_even_k_rejected():
    with pytest.raises(ValidationError, match="even values of k"):
        verify_irreversible(BlockSystem([1.0, 4.0], ONE), X, 2.0, k=4)


def test_irreversible_rejects_nonpositive_x0():
    with pytest.raises(ValidationError):
        verify_irreversible(BlockSystem([1.0, 4.0], ONE), X, -3.0)


# ---------------------------------------------------------- counterexample


def test_counterexample_coefficients():
    report = even_k_counterexample(1.0, 2.0)
    assert isinstance(report, CounterexampleReport)
    assert report.coefficients == pytest.approx((2.0, -6.0, 5.0))
    assert report.discriminant == pytest.approx(-4.0, abs=1e-12)
    assert not report.has_real_root


def test_counterexample_degenerate_pair():
    report = even_k_counterexample(3.0, 3.0)
    assert report.discriminant == pytest.approx(0.0, abs=1e-12)
    assert report.has_real_root


def test_counterexample_discriminant_formula():
    report = even_k_counterexample(1.0, 3.0)
    assert report.discriminant == pytest.approx(-16.0, abs=1e-12)


@pytest.mark.parametrize("x1,x2", [(0.0, 2.0), (-1.0, 2.0), (2.0, 0.0)])
def test_counterexample_requires_positive_points(x1, x2):
    with pytest.raises(ValidationError):
        even_k_counterexample(x1, x2)


# ------------------------------------------------------------------ jensen


def test_jensen_exponential():
    report = jensen_verify(parse_function("exp(x)"), [1.0, 3.0])
    assert report.x0 == pytest.approx(2.0, abs=1e-9)
    assert report.lhs == pytest.approx((math.e + math.e**3) / 2.0, abs=1e-8)
    assert report.rhs == pytest.approx(math.e**2, abs=1e-8)
    assert report.satisfied


def test_jensen_square_on_increasing_branch():
    report = jensen_verify(parse_function("x^2"), [1.0, 2.0, 3.0])
    assert report.x0 == pytest.approx(2.0, abs=1e-9)
    assert report.lhs == pytest.approx(14.0 / 3.0, abs=1e-8)
    assert report.rhs == pytest.approx(4.0, abs=1e-8)
    assert report.satisfied


def test_jensen_equal_points_zero_margin():
    report = jensen_verify(parse_function("exp(x)"), [2.0, 2.0])
    assert report.margin == pytest.approx(0.0, abs=1e-9)


def test_jensen_rejects_concave():
    with pytest.raises(ValidationError, match="order 2"):
        jensen_verify(parse_function("log(x)"), [1.0, 3.0])


def test_jensen_rejects_decreasing():
    with pytest.raises(ValidationError, match="order 1"):
        jensen_verify(parse_function("exp(0 - x)"), [1.0, 3.0])


# -------------------------------------------------------------- power mean


def test_powermean_b1_is_arithmetic_mean():
    assert powermean_solve([1.0, 3.0], 1.0, 1) == pytest.approx(2.0, abs=1e-10)


def test_powermean_b2_closed_form():
    assert powermean_solve([1.0, 7.0], 2.0, 1) == pytest.approx(5.0, abs=1e-9)


def test_powermean_k3_against_sign_scan():
    xs = [1.0, 2.0, 9.0]
    b, k = 1.0, 3

    def balance(y):
        return sum((x**b - y**b) ** k for x in xs)

    lo, hi = 1.0, 9.0
    grid = [lo + (hi - lo) * i / 4096 for i in range(4097)]
    for left, right in zip(grid, grid[1:]):
        if balance(left) == 0.0:
            lo = hi = left
            break
        if balance(left) * balance(right) < 0.0:
            lo, hi = left, right
            break
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if balance(lo) * balance(mid) <= 0.0:
            hi = mid
        else:
            lo = mid
    expected = 0.5 * (lo + hi)

    assert powermean_solve(xs, b, k) == pytest.approx(expected, abs=1e-9)


def test_powermean_verify_a2_b1():
    report = powermean_verify([1.0, 3.0], 2.0, 1.0, 1)
    assert report.x0 == pytest.approx(2.0, abs=1e-9)
    assert report.lhs == pytest.approx(2.0, abs=1e-7)
    assert report.rhs == 0.0
    assert report.margin == pytest.approx(10.0 - 2.0 * 4.0, abs=1e-7)
    assert not report.direction_flipped
    assert report.satisfied


def test_powermean_equal_exponents_zero_margin():
    report = powermean_verify([1.0, 5.0], 2.0, 2.0, 1)
    assert report.margin == pytest.approx(0.0, abs=1e-8)


def test_powermean_flipped_when_a_below_b():
    report = powermean_verify([1.0, 7.0], 1.0, 2.0, 1)
    assert report.direction_flipped
    assert report.margin == pytest.approx(8.0 - 2.0 * 5.0, abs=1e-7)
    assert report.satisfied


@pytest.mark.parametrize("bad", [0.0, -1.0])
def test_powermean_excluded_exponents(bad):
    with pytest.raises(ValidationError, match="the final form of the result changes"):
        powermean_solve([1.0, 3.0], bad, 1)
    with pytest.raises(ValidationError, match="excluded"):
        powermean_verify([1.0, 3.0], bad, 1.0, 1)


def test_powermean_even_k_rejected():
    with pytest.raises(ValidationError, match="even values of k"):
        powermean_solve([1.0, 3.0], 1.0, 2)


# ------------------------------------------------------------- BlockSystem


def test_block_system_sorts_with_capacities():
    sys = BlockSystem([4.0, 1.0], [X, ONE])
    assert sys.xs == (1.0, 4.0)
    report = verify_irreversible(sys, X, 2.0)
    assert report.lhs == pytest.approx(2.5, abs=1e-9)


def test_block_system_rejects_nonpositive_points():
    with pytest.raises(ValidationError):
        BlockSystem([0.0, 2.0], ONE)


def test_block_system_rejects_capacity_count_mismatch():
    with pytest.raises(ValidationError):
        BlockSystem([1.0, 2.0, 3.0], [ONE, X])


def test_block_system_rejects_empty():
    with pytest.raises(ValidationError):
        BlockSystem([], ONE)


def test_block_system_rejects_nonpositive_capacity():
    with pytest.raises(ValidationError):
        BlockSystem([1.0, 4.0], parse_function("x - 2"))


# -------------------------------------------------------------- properties


def test_flip_symmetry_on_random_draws():
    rng = random.Random(47)
    for _ in range(25):
        xs = draw_abscissas(rng, rng.randint(2, 5), 0.5, 6.0)
        f = draw_positive_function(rng, 0.45, 6.05)
        direction = rng.choice(("nondecreasing", "nonincreasing"))
        g = draw_monotone_function(rng, 0.45, 6.05, direction=direction)
        report = verify_reversible(BlockSystem(xs, f), g)
        assert report.direction_flipped == (direction == "nonincreasing")
        assert report.satisfied
