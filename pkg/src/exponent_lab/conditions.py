"""Condition records shared by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .exact import Decision, EpsExponent, Interval, ParamExponent, decide
from .exact.decide import Domain, as_domain

RELATIONS = (">", ">=", "<", "<=", "==")


@dataclass(frozen=True)
class Condition:
    """One decided inequality.

    ``margin`` is ``lhs - rhs`` for ``>``/``>=``/``==`` and ``rhs - lhs`` for
    ``<``/``<=``, so a satisfied condition always has a nonnegative margin.
    """

    id: str
    inequality: str
    relation: str
    satisfied: bool
    margin: Union[EpsExponent, ParamExponent]
    verdict: Optional[str] = None
    witness: Optional[Fraction] = None
    note: str = ""

    @property
    def strict(self) -> bool:
        return self.relation in (">", "<")


@dataclass(frozen=True)
class ConditionReport:
    title: str
    domain: str
    conditions: tuple[Condition, ...]
    notes: tuple[str, ...] = field(default_factory=tuple)
    # reported but not part of the pass/fail verdict
    informational: tuple[Condition, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.satisfied for c in self.conditions)

    @property
    def failed(self) -> list[Condition]:
        return [c for c in self.conditions if not c.satisfied]

    def get(self, cid: str) -> Condition:
        for c in self.conditions:
            if c.id == cid:
                return c
        raise KeyError(cid)


def domain_label(domain: Domain) -> str:
    domain = as_domain(domain)
    return str(domain) if isinstance(domain, Interval) else f"s = {domain}"


def _equality(cid: str, text: str, margin, domain: Domain, note: str) -> Condition:
    if isinstance(domain, Interval) and domain.lo != domain.hi:
        m = ParamExponent.lift(margin)
        ok = m.base.is_zero() and m.eps_order == 0
        witness = None
        if not ok:
            pts = [x for x in domain.sample_points(5) if m.base.num(x) != 0] or [domain.lo]
            witness = pts[0]
        return Condition(cid, text, "==", ok, m, "Zero" if m.base.is_zero() else "Nonzero", witness, note)
    s = domain.lo if isinstance(domain, Interval) else domain
    value = margin.at(s) if isinstance(margin, ParamExponent) else EpsExponent.lift(margin)
    ok = value.sign() == 0
    return Condition(cid, text, "==", ok, value, None, None if ok else s, note)


def check(cid: str, text: str, lhs, rhs, relation: str, domain: Domain, note: str = "") -> Condition:
    """Decide ``lhs <relation> rhs`` on ``domain`` (a rational point or an interval)."""
    if relation not in RELATIONS:
        raise ValueError(f"unknown relation {relation!r}")
    domain = as_domain(domain)
    plain = not isinstance(lhs, ParamExponent) and not isinstance(rhs, ParamExponent)
    if plain and (isinstance(lhs, EpsExponent) or isinstance(rhs, EpsExponent)):
        lhs_p, rhs_p = EpsExponent.lift(lhs), EpsExponent.lift(rhs)
    else:
        lhs_p, rhs_p = lhs, rhs
    if isinstance(lhs_p, EpsExponent) and isinstance(rhs_p, EpsExponent):
        margin = lhs_p - rhs_p if relation in (">", ">=", "==") else rhs_p - lhs_p
    else:
        lhs_p, rhs_p = ParamExponent.lift(lhs_p), ParamExponent.lift(rhs_p)
        margin = lhs_p - rhs_p if relation in (">", ">=", "==") else rhs_p - lhs_p
    if relation == "==":
        return _equality(cid, text, margin, domain, note)
    d: Decision = decide(margin, relation in (">", "<"), domain)
    verdict = str(d.verdict) if d.verdict is not None else None
    return Condition(cid, text, relation, d.satisfied, d.margin, verdict, d.witness, note or d.note)
