"""Rational functions of ``s`` with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction

from .polynomial import Number, Poly, as_fraction


_ONE = Poly.const(1)


class DegenerateMapError(ArithmeticError):
    """Raised when an affine map ``t -> a t + b`` has ``a == 1`` identically."""


class RatFn:
    """Normalized quotient ``num / den``.

    The stored form has ``gcd(num, den) == 1`` and a monic denominator, so two
    equal functions have identical ``(num, den)`` pairs.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly.const(as_fraction(num))
        if den is None:
            den = Poly.const(1)
        elif not isinstance(den, Poly):
            den = Poly.const(as_fraction(den))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Poly(), _ONE
        elif den.degree == 0:
            # polynomial: nothing to cancel
            num, den = (num if den.coeffs[0] == 1 else num.scale(1 / den.coeffs[0])), _ONE
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = den.lead
            num, den = num.scale(1 / lead), den.scale(1 / lead)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFn is immutable")

    @classmethod
    def lift(cls, x) -> "RatFn":
        if isinstance(x, RatFn):
            return x
        if isinstance(x, Poly):
            return cls(x)
        return cls(Poly.const(as_fraction(x)))

    @classmethod
    def s(cls) -> "RatFn":
        return cls(Poly.s())

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def is_const(self) -> bool:
        return self.is_poly() and self.num.degree <= 0

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError(f"{self} is not constant")
        return self.num(0)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __call__(self, x: Number) -> Fraction:
        x = as_fraction(x)
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole of {self} at s = {x}")
        return self.num(x) / d

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "RatFn":
        o = RatFn.lift(other)
        if self.den.degree == 0 and o.den.degree == 0:
            return RatFn(self.num + o.num)
        return RatFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFn":
        return RatFn(-self.num, self.den)

    def __sub__(self, other) -> "RatFn":
        return self + (-RatFn.lift(other))

    def __rsub__(self, other) -> "RatFn":
        return RatFn.lift(other) - self

    def __mul__(self, other) -> "RatFn":
        o = RatFn.lift(other)
        if self.den.degree == 0 and o.den.degree == 0:
            return RatFn(self.num * o.num)
        return RatFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFn":
        o = RatFn.lift(other)
        if o.is_zero():
            raise ZeroDivisionError("division by the zero function")
        return RatFn(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "RatFn":
        return RatFn.lift(other) / self

    def __pow__(self, n: int) -> "RatFn":
        if n >= 0:
            return RatFn(self.num ** n, self.den ** n)
        return RatFn(self.den ** -n, self.num ** -n)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Poly)):
            other = RatFn.lift(other)
        if not isinstance(other, RatFn):
            return NotImplemented
        return ratfn_equal(self, other)

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFn({self})"

    def __str__(self) -> str:
        if self.is_poly():
            return str(self.num.scale(1 / self.den.lead))
        return f"({self.num}) / ({self.den})"


def ratfn_equal(f: RatFn, g: RatFn) -> bool:
    """Decide ``f == g`` by cross-multiplication."""
    return (f.num * g.den - g.num * f.den).is_zero()


def affine_fixed_point(a, b) -> RatFn:
    """Fixed point ``b / (1 - a)`` of ``t -> a t + b``."""
    a, b = RatFn.lift(a), RatFn.lift(b)
    one_minus_a = 1 - a
    if one_minus_a.is_zero():
        raise DegenerateMapError("1 - a vanishes identically; the affine map has no unique fixed point")
    fp = b / one_minus_a
    if not ratfn_equal(a * fp + b, fp):  # pragma: no cover - algebraic identity
        raise ArithmeticError("fixed point check failed")
    return fp
