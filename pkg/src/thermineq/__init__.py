"""Numerical checks for entropy-style integral inequalities.

The core objects are piecewise expression functions (funcexpr), an
adaptive quadrature and root-finding layer (numerics), the inequality
checks themselves (theorems), and heat-exchange scenarios built on top
of them (thermo). The cli module wires everything to scenario files.
"""

from .errors import (
    BracketError,
    DomainError,
    EvalDomainError,
    NumericsError,
    ParseError,
    UsageError,
    ValidationError,
)
from .funcexpr import (
    ScalarFunction,
    check_derivative_positivity,
    check_monotonicity,
    check_positivity,
    classify_monotonicity,
    constant_function,
    derivative,
    eval_function,
    parse_function,
    parse_piecewise,
)
from .numerics import (
    QuadResult,
    RootResult,
    bisect_root,
    integrate,
    integrate_kfold,
    integrate_ratio,
    riemann_oracle,
    tensor_gauss_kfold,
)
from .theorems import (
    BlockSystem,
    CounterexampleReport,
    EquilibriumResult,
    InequalityReport,
    even_k_counterexample,
    jensen_verify,
    powermean_solve,
    powermean_verify,
    solve_equilibrium,
    verify_irreversible,
    verify_reversible,
)
from .thermo import (
    NegCapReport,
    ThermoOutcome,
    irreversible_equilibrate,
    negative_capacity_experiment,
    reservoir_contact,
    reversible_equilibrate,
)

__version__ = "0.1.0"

__all__ = [
    "BlockSystem",
    "BracketError",
    "CounterexampleReport",
    "DomainError",
    "EquilibriumResult",
    "EvalDomainError",
    "InequalityReport",
    "NegCapReport",
    "NumericsError",
    "ParseError",
    "QuadResult",
    "RootResult",
    "ScalarFunction",
    "ThermoOutcome",
    "UsageError",
    "ValidationError",
    "bisect_root",
    "check_derivative_positivity",
    "check_monotonicity",
    "check_positivity",
    "classify_monotonicity",
    "constant_function",
    "derivative",
    "eval_function",
    "even_k_counterexample",
    "integrate",
    "integrate_kfold",
    "integrate_ratio",
    "irreversible_equilibrate",
    "jensen_verify",
    "negative_capacity_experiment",
    "parse_function",
    "parse_piecewise",
    "powermean_solve",
    "powermean_verify",
    "reservoir_contact",
    "reversible_equilibrate",
    "riemann_oracle",
    "solve_equilibrium",
    "tensor_gauss_kfold",
    "verify_irreversible",
    "verify_reversible",
]
