"""Expression parsing, piecewise functions, derivatives and grid checks."""

from .checks import (
    DEFAULT_GRID,
    ValidationReport,
    check_derivative_positivity,
    check_monotonicity,
    check_positivity,
    classify_monotonicity,
    require_positive,
)
from .grammar import Binary, Call, Neg, Num, Var, compile_node, parse, to_text
from .jets import Jet
from .piecewise import (
    ScalarFunction,
    constant_function,
    derivative,
    eval_function,
    parse_function,
    parse_piecewise,
)

__all__ = [
    "Binary",
    "Call",
    "DEFAULT_GRID",
    "Jet",
    "Neg",
    "Num",
    "ScalarFunction",
    "ValidationReport",
    "Var",
    "check_derivative_positivity",
    "check_monotonicity",
    "check_positivity",
    "classify_monotonicity",
    "compile_node",
    "constant_function",
    "derivative",
    "eval_function",
    "parse",
    "parse_function",
    "parse_piecewise",
    "require_positive",
    "to_text",
]
