"""Epsilon-perturbed exponents.

An exponent written ``a+`` or ``a - 2eps`` is stored as a base value plus a
coefficient of one formal positive infinitesimal shared by the whole
inequality system.  The base is either a rational (:class:`EpsExponent`) or a
rational function of ``s`` (:class:`ParamExponent`).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .polynomial import Number, as_fraction
from .ratfunc import RatFn


def _fmt_eps(order: Fraction) -> str:
    if order == 0:
        return ""
    sign = "+" if order > 0 else "-"
    mag = abs(order)
    return f" {sign} {'' if mag == 1 else str(mag)}eps"


@functools.total_ordering
@dataclass(frozen=True)
class EpsExponent:
    """``base + eps_order * eps`` with lexicographic order on ``(base, eps_order)``.

    ``eps_order`` is usually a small integer; rational orders appear when an
    exponent is scaled (for instance ``sigma / 3`` in an embedding margin).
    """

    base: Fraction
    eps_order: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "base", as_fraction(self.base))
        object.__setattr__(self, "eps_order", as_fraction(self.eps_order))

    @classmethod
    def lift(cls, x) -> "EpsExponent":
        if isinstance(x, EpsExponent):
            return x
        if isinstance(x, ParamExponent):
            if not x.base.is_const():
                raise TypeError(f"{x} depends on s")
            return cls(x.base.const_value(), x.eps_order)
        return cls(as_fraction(x))

    def _key(self) -> tuple[Fraction, Fraction]:
        return (self.base, self.eps_order)

    def __lt__(self, other) -> bool:
        return self._key() < EpsExponent.lift(other)._key()

    def __eq__(self, other) -> bool:
        if not isinstance(other, (EpsExponent, int, Fraction)):
            return NotImplemented
        return self._key() == EpsExponent.lift(other)._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __add__(self, other) -> "EpsExponent":
        if isinstance(other, ParamExponent):
            return NotImplemented
        o = EpsExponent.lift(other)
        return EpsExponent(self.base + o.base, self.eps_order + o.eps_order)

    __radd__ = __add__

    def __neg__(self) -> "EpsExponent":
        return EpsExponent(-self.base, -self.eps_order)

    def __sub__(self, other) -> "EpsExponent":
        if isinstance(other, ParamExponent):
            return NotImplemented
        return self + (-EpsExponent.lift(other))

    def __rsub__(self, other) -> "EpsExponent":
        return EpsExponent.lift(other) - self

    def scale(self, c: Number) -> "EpsExponent":
        c = as_fraction(c)
        return EpsExponent(self.base * c, self.eps_order * c)

    def sign(self) -> int:
        """Sign of the exponent for all sufficiently small ``eps > 0``."""
        if self.base:
            return 1 if self.base > 0 else -1
        return (self.eps_order > 0) - (self.eps_order < 0)

    def __str__(self) -> str:
        return f"{self.base}{_fmt_eps(self.eps_order)}"


def eps_compare(a: EpsExponent, b: EpsExponent) -> int:
    """Three-way comparison: ``-1``, ``0`` or ``1``."""
    ka, kb = EpsExponent.lift(a)._key(), EpsExponent.lift(b)._key()
    return (ka > kb) - (ka < kb)


@dataclass(frozen=True)
class ParamExponent:
    """``base(s) + eps_order * eps`` with ``base`` a rational function of ``s``."""

    base: RatFn
    eps_order: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "base", RatFn.lift(self.base))
        object.__setattr__(self, "eps_order", as_fraction(self.eps_order))

    @classmethod
    def lift(cls, x) -> "ParamExponent":
        if isinstance(x, ParamExponent):
            return x
        if isinstance(x, EpsExponent):
            return cls(RatFn.lift(x.base), x.eps_order)
        return cls(RatFn.lift(x))

    @classmethod
    def s(cls) -> "ParamExponent":
        return cls(RatFn.s())

    def at(self, s: Number) -> EpsExponent:
        return EpsExponent(self.base(as_fraction(s)), self.eps_order)

    def is_const(self) -> bool:
        return self.base.is_const()

    def is_affine(self) -> bool:
        return self.base.is_poly() and self.base.num.degree <= 1

    def __add__(self, other) -> "ParamExponent":
        o = ParamExponent.lift(other)
        return ParamExponent(self.base + o.base, self.eps_order + o.eps_order)

    __radd__ = __add__

    def __neg__(self) -> "ParamExponent":
        return ParamExponent(-self.base, -self.eps_order)

    def __sub__(self, other) -> "ParamExponent":
        return self + (-ParamExponent.lift(other))

    def __rsub__(self, other) -> "ParamExponent":
        return ParamExponent.lift(other) - self

    def scale(self, c: Number) -> "ParamExponent":
        c = as_fraction(c)
        return ParamExponent(self.base * c, self.eps_order * c)

    def with_order(self, order: Number) -> "ParamExponent":
        return ParamExponent(self.base, as_fraction(order))

    def __eq__(self, other) -> bool:
        if isinstance(other, (EpsExponent, int, Fraction)):
            other = ParamExponent.lift(other)
        if not isinstance(other, ParamExponent):
            return NotImplemented
        return self.base == other.base and self.eps_order == other.eps_order

    def __hash__(self) -> int:
        return hash((self.base, self.eps_order))

    def __str__(self) -> str:
        return f"{self.base}{_fmt_eps(self.eps_order)}"


Exponent = Union[EpsExponent, ParamExponent]


def as_param(x) -> ParamExponent:
    return ParamExponent.lift(x)

