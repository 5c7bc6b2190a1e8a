"""Parse exponent expressions such as ``"1/4 - 2e"``, ``"5s/3 - 2"`` or ``"3/4+"``.

Symbols: ``s`` is the regularity parameter and ``e`` the formal
infinitesimal.  A trailing bare ``+`` or ``-`` is the ``a+`` / ``a-``
shorthand: it adds one unit of ``e`` and marks the order as free, so a
feasibility search may pick any order of that sign.  Decimal literals are
read exactly (``0.95`` is ``19/20``).  Scientific notation is not accepted,
because ``2e`` means ``2 * e``.
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .exponent import ParamExponent
from .ratfunc import RatFn
from .roots import Interval


class ExpressionError(ValueError):
    """Raised for malformed or unsupported exponent expressions."""


@dataclass(frozen=True)
class ParsedExponent:
    value: ParamExponent
    free_sign: Optional[int] = None  # +1 / -1 for a trailing "+" / "-"
    source: str = ""


_IMPLICIT = re.compile(r"(?<=[0-9.)se])\s*(?=[se(])")


def _normalize(text: str) -> str:
    t = text.strip()
    for a, b in (("−", "-"), ("ε", "e"), ("·", "*"), ("^", "**"), ("eps", "e")):
        t = t.replace(a, b)
    if not re.fullmatch(r"[0-9se+\-*/(). ]*", t):
        raise ExpressionError(f"unexpected characters in {text!r}")
    return _IMPLICIT.sub("*", t)


# (base, eps coefficient) pairs
_Val = tuple[RatFn, Fraction]


def _mul(a: _Val, b: _Val) -> _Val:
    (x, ex), (y, ey) = a, b
    if ex and ey:
        raise ExpressionError("product of two eps terms")
    if (ex and not y.is_const()) or (ey and not x.is_const()):
        raise ExpressionError("eps coefficient must not depend on s")
    eps = ex * (y.const_value() if ex else 0) + ey * (x.const_value() if ey else 0)
    return x * y, eps


def _eval(node, lits: list[Fraction]) -> _Val:
    if isinstance(node, ast.Expression):
        return _eval(node.body, lits)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise ExpressionError(f"unsupported literal {node.value!r}")
        raise AssertionError("numeric literals are substituted before evaluation")
    if isinstance(node, ast.Name):
        if node.id == "s":
            return RatFn.s(), Fraction(0)
        if node.id == "e":
            return RatFn.lift(0), Fraction(1)
        if node.id.startswith("_lit"):
            return RatFn.lift(lits[int(node.id[4:])]), Fraction(0)
        raise ExpressionError(f"unknown symbol {node.id!r}")
    if isinstance(node, ast.UnaryOp):
        v = _eval(node.operand, lits)
        if isinstance(node.op, ast.USub):
            return -v[0], -v[1]
        if isinstance(node.op, ast.UAdd):
            return v
    if isinstance(node, ast.BinOp):
        a = _eval(node.left, lits)
        b = _eval(node.right, lits)
        if isinstance(node.op, ast.Add):
            return a[0] + b[0], a[1] + b[1]
        if isinstance(node.op, ast.Sub):
            return a[0] - b[0], a[1] - b[1]
        if isinstance(node.op, ast.Mult):
            return _mul(a, b)
        if isinstance(node.op, ast.Div):
            if b[1]:
                raise ExpressionError("division by an eps term")
            if b[0].is_zero():
                raise ExpressionError("division by zero")
            if a[1] and not b[0].is_const():
                raise ExpressionError("eps coefficient must not depend on s")
            scale = 1 / b[0].const_value() if a[1] else Fraction(0)
            return a[0] / b[0], a[1] * scale
        if isinstance(node.op, ast.Pow):
            if b[1] or not b[0].is_const() or b[0].const_value().denominator != 1:
                raise ExpressionError("exponents must be integer constants")
            n = int(b[0].const_value())
            if a[1]:
                if n != 1:
                    raise ExpressionError("powers of eps terms are not linear in eps")
                return a
            return a[0] ** n, Fraction(0)
    raise ExpressionError(f"unsupported syntax: {ast.dump(node)}")


def parse_value(text: str) -> ParamExponent:
    """Parse an expression without the trailing free-order marker."""
    parsed = parse_exponent(text)
    if parsed.free_sign is not None:
        raise ExpressionError(f"unexpected trailing sign in {text!r}")
    return parsed.value


def parse_exponent(text) -> ParsedExponent:
    """Parse ``text`` into a :class:`ParsedExponent`."""
    if isinstance(text, (int, Fraction)):
        return ParsedExponent(ParamExponent.lift(text), None, str(text))
    if not isinstance(text, str):
        raise ExpressionError(f"cannot parse {type(text).__name__}")
    t = _normalize(text)
    free = None
    stripped = t.rstrip()
    if stripped.endswith(("+", "-")) and not stripped.endswith(("**+", "**-")):
        free = 1 if stripped.endswith("+") else -1
        t = stripped[:-1]
    if not t.strip():
        raise ExpressionError(f"empty expression {text!r}")
    literals: list[Fraction] = []

    def _sub(m: re.Match) -> str:
        literals.append(Fraction(m.group(0)))
        return f"_lit{len(literals) - 1}"

    t = re.sub(r"\d+\.\d*|\.\d+|\d+", _sub, t)
    try:
        tree = ast.parse(t, mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None
    base, eps = _eval(tree, literals)
    if free is not None:
        eps += free
    return ParsedExponent(ParamExponent(base, eps), free, text)


_INTERVAL = re.compile(r"\s*([\[(])\s*([^,]+?)\s*,\s*([^\])]+?)\s*([\])])\s*")


def parse_interval(text: str) -> Interval:
    """``"(3/4, 1]"`` with bracket-marked openness, or ``"a:b"`` for a closed interval."""
    m = _INTERVAL.fullmatch(text)
    try:
        if m:
            lo, hi = parse_value(m.group(2)), parse_value(m.group(3))
            lo_open, hi_open = m.group(1) == "(", m.group(4) == ")"
        elif text.count(":") == 1:
            a, b = text.split(":")
            lo, hi = parse_value(a), parse_value(b)
            lo_open = hi_open = False
        else:
            raise ExpressionError(f"cannot parse interval {text!r}")
        if not (lo.is_const() and hi.is_const()) or lo.eps_order or hi.eps_order:
            raise ExpressionError(f"interval endpoints must be rational constants: {text!r}")
        return Interval(lo.base.const_value(), hi.base.const_value(), lo_open, hi_open)
    except ValueError as exc:
        if isinstance(exc, ExpressionError):
            raise
        raise ExpressionError(str(exc)) from None


def parse_rational(text: str) -> Fraction:
    """An exact rational from ``"p/q"``, an integer or a decimal literal."""
    v = parse_value(text)
    if not v.is_const() or v.eps_order:
        raise ExpressionError(f"expected a rational number, got {text!r}")
    return v.base.const_value()
