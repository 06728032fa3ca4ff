"""Scenario files: JSON in, typed fields out.

A scenario is one JSON object with a "mode" plus whatever that mode
needs. This module owns the decoding conventions (what counts as a
function spec, which keys alias which) so the runner stays about
dispatch and bookkeeping. Nothing here computes anything.
"""

from __future__ import annotations

import json

from .errors import ValidationError
from .funcexpr.piecewise import ScalarFunction, parse_function, parse_piecewise

MODES = (
    "reversible",
    "irreversible",
    "reservoir",
    "negcap",
    "jensen",
    "powermean",
    "counterexample",
)


def load_scenario(path, default_mode: str | None = None) -> dict:
    """Read and minimally validate one scenario file.

    default_mode fills in a missing "mode" key (the thermo command names
    the mode on the command line instead of in the file).
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: a scenario must be a JSON object")
    if "mode" not in data and default_mode is not None:
        data["mode"] = default_mode
    mode = data.get("mode")
    if mode not in MODES:
        raise ValidationError(
            f"{path}: mode must be one of {', '.join(MODES)}, got {mode!r}"
        )
    return data


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def require_number(data: dict, *keys) -> float:
    """The first present key wins; extra keys are accepted aliases."""
    for key in keys:
        if key in data:
            v = data[key]
            if not _is_number(v):
                raise ValidationError(f"field {key!r} must be a number, got {v!r}")
            return float(v)
    raise ValidationError(f"scenario is missing the {keys[0]!r} field")


def optional_number(data: dict, *keys, default=None):
    for key in keys:
        if key in data:
            return require_number(data, key)
    return default


def require_points(data: dict, *keys) -> list:
    for key in keys:
        if key in data:
            v = data[key]
            if not isinstance(v, list) or not v or not all(_is_number(e) for e in v):
                raise ValidationError(
                    f"field {key!r} must be a non-empty list of numbers, got {v!r}"
                )
            return [float(e) for e in v]
    raise ValidationError(f"scenario is missing the {keys[0]!r} field")


def read_k(data: dict) -> int:
    """k as written, default 1. Oddness is the checks' business, not ours."""
    k = data.get("k", 1)
    if isinstance(k, bool) or not isinstance(k, int):
        raise ValidationError(f"field 'k' must be an integer, got {k!r}")
    return k


def function_spec(spec, *, positive=False, monotonicity=None) -> ScalarFunction:
    """Decode one function field.

    Accepts expression text, a bare number (a constant), or a list of
    piecewise records [{"from": b, "expr": e}, ..., {"to": b_end}].
    """
    if isinstance(spec, str):
        return parse_function(
            spec, declared_positive=positive, declared_monotonicity=monotonicity
        )
    if _is_number(spec):
        return parse_function(
            repr(float(spec)), declared_positive=positive, declared_monotonicity=monotonicity
        )
    if isinstance(spec, list):
        return parse_piecewise(
            spec, declared_positive=positive, declared_monotonicity=monotonicity
        )
    raise ValidationError(f"cannot read a function from {spec!r}")


def capacity_spec(spec, n_blocks: int):
    """The f field: one shared function, or a list with one entry per block.

    A list of record dicts is a single piecewise function; any other list
    is read element-wise as per-block capacities.
    """
    if isinstance(spec, list) and not all(isinstance(e, dict) for e in spec):
        if len(spec) != n_blocks:
            raise ValidationError(
                f"{n_blocks} blocks need {n_blocks} capacities, got {len(spec)}"
            )
        return [function_spec(e) for e in spec]
    return function_spec(spec)


def require_function(data: dict, key: str, **kwargs) -> ScalarFunction:
    if key not in data:
        raise ValidationError(f"scenario is missing the {key!r} field")
    return function_spec(data[key], **kwargs)


__all__ = [
    "MODES",
    "capacity_spec",
    "function_spec",
    "load_scenario",
    "optional_number",
    "read_k",
    "require_function",
    "require_number",
    "require_points",
]
