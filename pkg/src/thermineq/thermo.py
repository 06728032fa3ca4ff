"""Heat-exchange scenarios with entropy and work bookkeeping.

The weight function is always the temperature itself here; what changes
between scenarios is which balance is driven to zero. Reversible contact
(ideal engines between the blocks) zeroes total entropy change and pays
out work; direct irreversible contact zeroes the heat balance and leaves
an entropy surplus; reservoir contact pins the final temperature and
books the reservoir's entropy change at fixed temperature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .funcexpr.checks import require_positive
from .funcexpr.piecewise import constant_function, parse_function
from .numerics import DEFAULT_QUAD_TOL, DEFAULT_RESIDUAL_TOL, integrate, integrate_ratio
from .theorems import BlockSystem, _balance_root

_TEMPERATURE = parse_function("x", declared_monotonicity="nondecreasing")

DEFAULT_ENTROPY_TOL = 1e-8


@dataclass(frozen=True)
class ThermoOutcome:
    T_final: float
    work_net: float
    dS_per_body: tuple
    dS_total: float
    dQ_residual: float


@dataclass(frozen=True)
class NegCapReport:
    C: float
    T1: float
    T2: float
    T_eq: float
    dS_total: float
    entropy_decreased: bool
    valid: bool
    t2_above_threshold: bool


def reversible_equilibrate(
    sys: BlockSystem,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
    quad_tol: float = DEFAULT_QUAD_TOL,
) -> ThermoOutcome:
    """Equilibrate through ideal engines: zero net entropy change, work out.

    T_final is the root of the entropy balance sum of integrals of
    f_i(T)/T from T_final to T_i; the work is whatever energy the blocks
    gave up on the way there. Energy closure is an identity here (work is
    defined as the surplus), so dQ_residual is exactly zero.
    """

    def entropy_balance(y):
        return math.fsum(
            integrate_ratio(f, _TEMPERATURE, y, t, quad_tol).value
            for t, f in zip(sys.xs, sys.capacities)
        )

    root = _balance_root(sys.xs, entropy_balance, residual_tol, quad_tol)
    t_final = root.root
    work = math.fsum(
        integrate(f, t_final, t, quad_tol).value for t, f in zip(sys.xs, sys.capacities)
    )
    per_body = tuple(
        integrate_ratio(f, _TEMPERATURE, t, t_final, quad_tol).value
        for t, f in zip(sys.xs, sys.capacities)
    )
    return ThermoOutcome(t_final, work, per_body, math.fsum(per_body), 0.0)


def irreversible_equilibrate(
    sys: BlockSystem,
    residual_tol: float = DEFAULT_RESIDUAL_TOL,
    quad_tol: float = DEFAULT_QUAD_TOL,
) -> ThermoOutcome:
    """Equilibrate by direct thermal contact: zero heat balance, no work.

    dQ_residual reports the heat the blocks would have absorbed from
    nowhere at the computed T_final; it is the root residual and should
    sit at quadrature noise level.
    """

    def heat_balance(y):
        return math.fsum(
            integrate(f, y, t, quad_tol).value for t, f in zip(sys.xs, sys.capacities)
        )

    root = _balance_root(sys.xs, heat_balance, residual_tol, quad_tol)
    t_final = root.root
    per_body = tuple(
        integrate_ratio(f, _TEMPERATURE, t, t_final, quad_tol).value
        for t, f in zip(sys.xs, sys.capacities)
    )
    return ThermoOutcome(t_final, 0.0, per_body, math.fsum(per_body), -root.residual + 0.0)


def reservoir_contact(
    sys: BlockSystem,
    T0: float,
    quad_tol: float = DEFAULT_QUAD_TOL,
) -> ThermoOutcome:
    """Bring every block to reservoir temperature T0.

    The reservoir is ideal: infinite capacity, fixed temperature, entropy
    change equal to the heat it receives divided by T0. Its entry is the
    last element of dS_per_body. The heat ledger closes by definition, so
    dQ_residual is exactly zero.
    """
    T0 = float(T0)
    if not (math.isfinite(T0) and T0 > 0.0):
        raise ValidationError(f"reservoir temperature must be a positive real, got {T0!r}")
    for t, f in zip(sys.xs, sys.capacities):
        lo, hi = min(T0, t), max(T0, t)
        if lo < hi:
            require_positive(f, (lo, hi), label="capacity")
    blocks = tuple(
        integrate_ratio(f, _TEMPERATURE, t, T0, quad_tol).value
        for t, f in zip(sys.xs, sys.capacities)
    )
    heat_into_blocks = math.fsum(
        integrate(f, T0, t, quad_tol).value for t, f in zip(sys.xs, sys.capacities)
    )
    reservoir = heat_into_blocks / T0
    per_body = blocks + (reservoir,)
    return ThermoOutcome(T0, 0.0, per_body, math.fsum(per_body), 0.0)


def negative_capacity_experiment(
    C: float,
    T1: float,
    T2: float,
    tol: float = DEFAULT_ENTROPY_TOL,
    quad_tol: float = DEFAULT_QUAD_TOL,
) -> NegCapReport:
    """Thermal contact between a body of capacity -C at T1 and one of 2C at T2.

    The first law fixes the common final temperature at 2*T2 - T1; when
    that is not positive the setup is unphysical and rejected. The total
    entropy change is computed by quadrature and comes out negative for
    any T2 != T1, which is the point of the exercise: a negative heat
    capacity breaks the entropy statement. The threshold flag records the
    separately stated condition T2 > (sqrt(2)-1)*T1 without asserting any
    relation to the computed sign.
    """
    C, T1, T2 = float(C), float(T1), float(T2)
    for name, v in (("C", C), ("T1", T1), ("T2", T2)):
        if not (math.isfinite(v) and v > 0.0):
            raise ValidationError(f"{name} must be a positive real, got {v!r}")
    t_eq = 2.0 * T2 - T1
    if t_eq <= 0.0:
        raise ValidationError(
            f"equilibrium temperature 2*T2 - T1 = {t_eq!r} is not positive; "
            f"the experiment has no physical endpoint"
        )
    ds_cold = integrate_ratio(constant_function(-C), _TEMPERATURE, T1, t_eq, quad_tol).value
    ds_hot = integrate_ratio(constant_function(2.0 * C), _TEMPERATURE, T2, t_eq, quad_tol).value
    ds_total = ds_cold + ds_hot
    return NegCapReport(
        C,
        T1,
        T2,
        t_eq,
        ds_total,
        entropy_decreased=ds_total < -tol,
        valid=t_eq > 0.0,
        t2_above_threshold=T2 > (math.sqrt(2.0) - 1.0) * T1,
    )


__all__ = [
    "DEFAULT_ENTROPY_TOL",
    "NegCapReport",
    "ThermoOutcome",
    "irreversible_equilibrate",
    "negative_capacity_experiment",
    "reservoir_contact",
    "reversible_equilibrate",
]
