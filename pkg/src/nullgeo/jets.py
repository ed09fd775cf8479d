"""Second-order forward-mode automatic differentiation in two variables.

A ``Jet2`` carries a value together with its first and second partial
derivatives with respect to the two chart variables.  Arithmetic follows
the Leibniz/chain rules truncated at order two; the single mixed partial
``dxy`` keeps the symmetry of second derivatives by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import EvalDomainError, UsageError

_MAX_INT_POW = 8


@dataclass(frozen=True, slots=True)
class Jet2:
    v: float
    dx: float = 0.0
    dy: float = 0.0
    dxx: float = 0.0
    dxy: float = 0.0
    dyy: float = 0.0

    def __add__(self, other):
        o = _as_jet(other)
        return Jet2(self.v + o.v, self.dx + o.dx, self.dy + o.dy,
                    self.dxx + o.dxx, self.dxy + o.dxy, self.dyy + o.dyy)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.v, -self.dx, -self.dy, -self.dxx, -self.dxy, -self.dyy)

    def __sub__(self, other):
        return self + (-_as_jet(other))

    def __rsub__(self, other):
        return _as_jet(other) + (-self)

    def __mul__(self, other):
        o = _as_jet(other)
        return Jet2(
            self.v * o.v,
            self.dx * o.v + self.v * o.dx,
            self.dy * o.v + self.v * o.dy,
            self.dxx * o.v + 2.0 * self.dx * o.dx + self.v * o.dxx,
            self.dxy * o.v + self.dx * o.dy + self.dy * o.dx + self.v * o.dxy,
            self.dyy * o.v + 2.0 * self.dy * o.dy + self.v * o.dyy,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_jet(other)
        if o.v == 0.0:
            raise EvalDomainError("division by zero")
        t = o.v
        return self * _chain(o, 1.0 / t, -1.0 / (t * t), 2.0 / (t * t * t))

    def __rtruediv__(self, other):
        return _as_jet(other) / self

    def __pow__(self, other):
        return jet_pow(self, other)

    def is_constant(self) -> bool:
        return (self.dx == 0.0 and self.dy == 0.0 and
                self.dxx == 0.0 and self.dxy == 0.0 and self.dyy == 0.0)


def _as_jet(x) -> Jet2:
    if isinstance(x, Jet2):
        return x
    return Jet2(float(x))


def jet_const(value: float) -> Jet2:
    return Jet2(float(value))


def jet_var(which: str, value: float) -> Jet2:
    """Seed a chart variable: the matching first partial is 1."""
    if which == "x":
        return Jet2(float(value), dx=1.0)
    if which == "y":
        return Jet2(float(value), dy=1.0)
    raise UsageError(f"jet variable must be 'x' or 'y', not {which!r}")


def _chain(a: Jet2, f0: float, f1: float, f2: float) -> Jet2:
    """Compose a scalar function (value f0, derivatives f1, f2 at a.v) with a jet."""
    return Jet2(
        f0,
        f1 * a.dx,
        f1 * a.dy,
        f2 * a.dx * a.dx + f1 * a.dxx,
        f2 * a.dx * a.dy + f1 * a.dxy,
        f2 * a.dy * a.dy + f1 * a.dyy,
    )


def jet_pow(a: Jet2, e) -> Jet2:
    """Power a**e.  A constant integer exponent with |e| <= 8 is expanded by
    repeated multiplication (valid for negative bases); other constant
    exponents use the power rule; jet exponents use exp(e*log a)."""
    ej = _as_jet(e)
    if ej.is_constant():
        c = ej.v
        if float(c).is_integer() and abs(c) <= _MAX_INT_POW:
            n = int(c)
            if n == 0:
                return jet_const(1.0)
            out = jet_const(1.0)
            for _ in range(abs(n)):
                out = out * a
            return out if n > 0 else jet_const(1.0) / out
        if not float(c).is_integer() and a.v <= 0.0:
            raise EvalDomainError(
                f"pow with non-integer exponent needs a positive base, got {a.v}")
        try:
            f0 = math.pow(a.v, c)
            f1 = c * math.pow(a.v, c - 1.0)
            f2 = c * (c - 1.0) * math.pow(a.v, c - 2.0)
        except (ValueError, OverflowError) as exc:
            raise EvalDomainError(f"pow domain error: {exc}") from exc
        return _chain(a, f0, f1, f2)
    if a.v <= 0.0:
        raise EvalDomainError("pow with a varying exponent needs a positive base")
    return jet_exp(ej * jet_log(a))


def jet_sin(a: Jet2) -> Jet2:
    return _chain(a, math.sin(a.v), math.cos(a.v), -math.sin(a.v))


def jet_cos(a: Jet2) -> Jet2:
    return _chain(a, math.cos(a.v), -math.sin(a.v), -math.cos(a.v))


def jet_sinh(a: Jet2) -> Jet2:
    return _chain(a, math.sinh(a.v), math.cosh(a.v), math.sinh(a.v))


def jet_cosh(a: Jet2) -> Jet2:
    return _chain(a, math.cosh(a.v), math.sinh(a.v), math.cosh(a.v))


def jet_exp(a: Jet2) -> Jet2:
    e = math.exp(a.v)
    return _chain(a, e, e, e)


def jet_log(a: Jet2) -> Jet2:
    if a.v <= 0.0:
        raise EvalDomainError(f"log of non-positive value {a.v}")
    return _chain(a, math.log(a.v), 1.0 / a.v, -1.0 / (a.v * a.v))


def jet_sqrt(a: Jet2) -> Jet2:
    if a.v <= 0.0:
        raise EvalDomainError(f"sqrt of non-positive value {a.v}")
    r = math.sqrt(a.v)
    return _chain(a, r, 0.5 / r, -0.25 / (r * a.v))


def jet_tanh(a: Jet2) -> Jet2:
    t = math.tanh(a.v)
    s = 1.0 - t * t  # sech^2
    return _chain(a, t, s, -2.0 * t * s)


def jet_neg(a: Jet2) -> Jet2:
    return -a


ELEMENTARY = {
    "sin": jet_sin,
    "cos": jet_cos,
    "sinh": jet_sinh,
    "cosh": jet_cosh,
    "exp": jet_exp,
    "log": jet_log,
    "sqrt": jet_sqrt,
    "tanh": jet_tanh,
    "neg": jet_neg,
}

_BINARY = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
    "pow": jet_pow,
}


def jet_combine(op: str, a: Jet2, b: Jet2) -> Jet2:
    try:
        fn = _BINARY[op]
    except KeyError:
        raise UsageError(f"unknown binary op {op!r}") from None
    return fn(a, b)


def jet_elementary(fn: str, a: Jet2) -> Jet2:
    try:
        f = ELEMENTARY[fn]
    except KeyError:
        raise UsageError(f"unknown elementary function {fn!r}") from None
    return f(a)
