"""Second-order forward-mode differentiation.

A Jet carries a value together with first and second derivatives with
respect to a single underlying variable. Arithmetic on jets propagates
all three components at once, so one evaluation of an expression yields
f(x), f'(x) and f''(x). Components may be floats or numpy arrays; the
formulas below are written so either works unchanged.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import EvalDomainError


class Jet:
    __slots__ = ("val", "d1", "d2")

    def __init__(self, val, d1, d2):
        self.val = val
        self.d1 = d1
        self.d2 = d2

    @classmethod
    def variable(cls, x):
        """The identity jet: value x, unit slope, zero curvature."""
        if isinstance(x, np.ndarray):
            return cls(x, np.ones_like(x), np.zeros_like(x))
        return cls(float(x), 1.0, 0.0)

    @classmethod
    def lift(cls, c, like=None):
        """A constant jet. `like` supplies the array shape when needed."""
        if isinstance(like, np.ndarray):
            return cls(np.full_like(like, float(c)), np.zeros_like(like), np.zeros_like(like))
        return cls(float(c), 0.0, 0.0)

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        template = self.val if isinstance(self.val, np.ndarray) else None
        return Jet.lift(other, like=template)

    def __add__(self, other):
        o = self._coerce(other)
        return Jet(self.val + o.val, self.d1 + o.d1, self.d2 + o.d2)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.val, -self.d1, -self.d2)

    def __sub__(self, other):
        o = self._coerce(other)
        return Jet(self.val - o.val, self.d1 - o.d1, self.d2 - o.d2)

    def __rsub__(self, other):
        return self._coerce(other).__sub__(self)

    def __mul__(self, other):
        o = self._coerce(other)
        return Jet(
            self.val * o.val,
            self.d1 * o.val + self.val * o.d1,
            self.d2 * o.val + 2.0 * self.d1 * o.d1 + self.val * o.d2,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        v = self.val / o.val
        d1 = (self.d1 - v * o.d1) / o.val
        d2 = (self.d2 - 2.0 * d1 * o.d1 - v * o.d2) / o.val
        return Jet(v, d1, d2)

    def __rtruediv__(self, other):
        return self._coerce(other).__truediv__(self)

    def __pow__(self, other):
        if isinstance(other, Jet):
            if _is_zero(other.d1) and _is_zero(other.d2):
                other = other.val
            else:
                # u^w with varying exponent: route through exp(w log u).
                return (other * self.log()).exp()
        p = other
        if isinstance(p, (int, float)):
            if p == 0:
                like = self.val if isinstance(self.val, np.ndarray) else None
                return Jet.lift(1.0, like=like)
            if p == 1:
                return Jet(self.val, self.d1, self.d2)
            v = power(self.val, p)
            vm1 = power(self.val, p - 1)
            vm2 = power(self.val, p - 2)
            d1 = p * vm1 * self.d1
            d2 = p * vm1 * self.d2 + p * (p - 1.0) * vm2 * self.d1 * self.d1
            return Jet(v, d1, d2)
        return NotImplemented

    def __rpow__(self, other):
        return (self * math.log(other)).exp() if isinstance(other, (int, float)) else NotImplemented

    def exp(self):
        e = exp(self.val)
        return Jet(e, e * self.d1, e * (self.d1 * self.d1 + self.d2))

    def log(self):
        v = log(self.val)
        r = self.d1 / self.val
        return Jet(v, r, self.d2 / self.val - r * r)

    def sqrt(self):
        s = sqrt(self.val)
        d1 = self.d1 / (2.0 * s)
        d2 = (self.d2 - 2.0 * d1 * d1) / (2.0 * s)
        return Jet(s, d1, d2)

    def __abs__(self):
        s = sign(self.val)
        return Jet(abs(self.val), s * self.d1, s * self.d2)

    def __repr__(self):
        return f"Jet({self.val!r}, {self.d1!r}, {self.d2!r})"


def _is_zero(c) -> bool:
    if isinstance(c, np.ndarray):
        return bool(np.all(c == 0.0))
    return c == 0.0


# Dispatchers usable on floats, arrays and jets alike. Compiled expression
# closures call these so one code path serves every evaluation mode.

def exp(x):
    if isinstance(x, Jet):
        return x.exp()
    if isinstance(x, np.ndarray):
        return np.exp(x)
    return math.exp(x)


def log(x):
    if isinstance(x, Jet):
        return x.log()
    if isinstance(x, np.ndarray):
        return np.log(x)
    if x <= 0.0:
        raise EvalDomainError(f"log of non-positive value {x!r}")
    return math.log(x)


def sqrt(x):
    if isinstance(x, Jet):
        return x.sqrt()
    if isinstance(x, np.ndarray):
        return np.sqrt(x)
    if x < 0.0:
        raise EvalDomainError(f"sqrt of negative value {x!r}")
    return math.sqrt(x)


def sign(x):
    if isinstance(x, np.ndarray):
        return np.sign(x)
    return float((x > 0) - (x < 0))


def power(base, p):
    if isinstance(base, Jet):
        return base ** p
    if isinstance(p, Jet):
        return base ** p
    if isinstance(base, np.ndarray) or isinstance(p, np.ndarray):
        return np.power(base, p)
    # math.pow raises for negative base with fractional exponent instead of
    # silently promoting to complex the way ** does.
    return math.pow(base, p)
