"""Decide ``margin > 0`` or ``margin >= 0`` at a point or over an interval of ``s``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .exponent import EpsExponent, ParamExponent
from .polynomial import as_fraction
from .roots import Interval, Sign, SignVerdict, sign_on_interval

Domain = Union[Fraction, Interval]


def as_domain(d) -> Domain:
    if isinstance(d, Interval):
        return d
    return as_fraction(d)


@dataclass(frozen=True)
class Decision:
    """Outcome of one inequality check.

    ``margin`` is the exponent whose positivity was decided.  In interval mode
    ``verdict`` holds the sign of ``numerator * denominator`` of the margin
    base; ``witness`` is an ``s`` where the inequality fails, when one exists.
    """

    satisfied: bool
    strict: bool
    margin: Union[EpsExponent, ParamExponent]
    verdict: Optional[SignVerdict] = None
    witness: Optional[Fraction] = None
    note: str = ""


def _eps_ok(order: Fraction, strict: bool) -> bool:
    return order > 0 if strict else order >= 0


def decide(margin, strict: bool, domain: Domain) -> Decision:
    """Decide the sign condition on ``margin`` for all sufficiently small eps.

    At a point the test is lexicographic on ``(base, eps_order)``.  On an
    interval the base must be nonnegative throughout; wherever it vanishes
    the eps order has to carry the inequality.
    """
    domain = as_domain(domain)
    if isinstance(domain, Fraction) or (isinstance(domain, Interval) and domain.lo == domain.hi):
        s = domain if isinstance(domain, Fraction) else domain.lo
        if isinstance(margin, ParamExponent):
            value = margin.at(s)
        else:
            value = EpsExponent.lift(margin)
        sign = value.sign()
        ok = sign > 0 or (not strict and sign == 0)
        return Decision(ok, strict, value, witness=None if ok else s)

    m = ParamExponent.lift(margin)
    base = m.base
    if base.is_zero():
        ok = _eps_ok(m.eps_order, strict)
        return Decision(ok, strict, m, SignVerdict(Sign.ZERO, strict),
                        witness=None if ok else domain.lo, note="base vanishes identically")
    den_verdict = sign_on_interval(base.den, Interval(domain.lo, domain.hi), strict=True)
    if den_verdict.kind not in (Sign.POSITIVE, Sign.NEGATIVE):
        raise ZeroDivisionError(f"margin {m} has a pole on {domain}")
    # sign(num/den) == sign(num*den) away from poles
    verdict = sign_on_interval(base.num * base.den, domain, strict=False)
    if verdict.kind is Sign.POSITIVE:
        if not verdict.zeros or _eps_ok(m.eps_order, strict):
            return Decision(True, strict, m, verdict)
        z = verdict.zeros[0]
        return Decision(False, strict, m, verdict, witness=z.approx,
                        note="base vanishes inside the domain and eps does not help")
    if verdict.kind is Sign.MIXED:
        witness = verdict.witness_neg if verdict.witness_neg is not None else verdict.witness
        return Decision(False, strict, m, verdict, witness=witness)
    # NEGATIVE (or ZERO on the whole interval, which cannot happen for nonzero base)
    return Decision(False, strict, m, verdict, witness=domain.midpoint)
