"""Checkers for the bilinear wave-Sobolev estimate and the Sobolev product law,
plus an exact search over free epsilon orders."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .conditions import ConditionReport, check, domain_label
from .exact import Interval, ParamExponent, as_param, decide
from .exact.decide import Domain, as_domain

SLOTS = ("s0", "s1", "s2", "b0", "b1", "b2")

EDITORIAL_NOTE = "the printed list repeats b0+b1 > 0; the second copy is read as b0+b2 > 0"


class UnsupportedShapeError(ValueError):
    """Interval checks need exponents affine in s."""


@dataclass(frozen=True)
class AfsSextuple:
    s0: ParamExponent
    s1: ParamExponent
    s2: ParamExponent
    b0: ParamExponent
    b1: ParamExponent
    b2: ParamExponent

    def __post_init__(self):
        for name in SLOTS:
            object.__setattr__(self, name, as_param(getattr(self, name)))

    @classmethod
    def of(cls, values: Sequence) -> "AfsSextuple":
        return cls(*values)

    def values(self) -> tuple[ParamExponent, ...]:
        return tuple(getattr(self, n) for n in SLOTS)

    def with_orders(self, orders: dict) -> "AfsSextuple":
        vals = [v.with_order(orders[n]) if n in orders else v for n, v in zip(SLOTS, self.values())]
        return AfsSextuple(*vals)

    def swapped(self) -> "AfsSextuple":
        """Exchange the two factors: ``(s1, b1) <-> (s2, b2)``."""
        return AfsSextuple(self.s0, self.s2, self.s1, self.b0, self.b2, self.b1)


def afs_conditions(x: AfsSextuple) -> list[tuple[str, str, ParamExponent, ParamExponent, str]]:
    """The full condition list as ``(id, text, lhs, rhs, relation)``."""
    return _condition_rows(x.values())


def _condition_rows(values) -> list:
    s0, s1, s2, b0, b1, b2 = values
    S = s0 + s1 + s2
    B = b0 + b1 + b2
    half, three_half = Fraction(1, 2), Fraction(3, 2)
    out = [
        ("b0+b1+b2>1/2", "b0+b1+b2 > 1/2", B, half, ">"),
        ("b0+b1>0", "b0+b1 > 0", b0 + b1, 0, ">"),
        ("b0+b2>0", "b0+b2 > 0", b0 + b2, 0, ">"),
        ("b1+b2>0", "b1+b2 > 0", b1 + b2, 0, ">"),
        ("S>2-B", "s0+s1+s2 > 2-(b0+b1+b2)", S, 2 - B, ">"),
        ("S>3/2-(b0+b1)", "s0+s1+s2 > 3/2-(b0+b1)", S, three_half - (b0 + b1), ">"),
        ("S>3/2-(b0+b2)", "s0+s1+s2 > 3/2-(b0+b2)", S, three_half - (b0 + b2), ">"),
        ("S>3/2-(b1+b2)", "s0+s1+s2 > 3/2-(b1+b2)", S, three_half - (b1 + b2), ">"),
        ("S>1-b0", "s0+s1+s2 > 1-b0", S, 1 - b0, ">"),
        ("S>1-b1", "s0+s1+s2 > 1-b1", S, 1 - b1, ">"),
        ("S>1-b2", "s0+s1+s2 > 1-b2", S, 1 - b2, ">"),
        ("S>1", "s0+s1+s2 > 1", S, 1, ">"),
        ("S+(s1+s2+b0)>3/2", "(s0+s1+s2)+(s1+s2+b0) > 3/2", S + s1 + s2 + b0, three_half, ">"),
        ("S+(s0+s2+b1)>3/2", "(s0+s1+s2)+(s0+s2+b1) > 3/2", S + s0 + s2 + b1, three_half, ">"),
        ("S+(s0+s1+b2)>3/2", "(s0+s1+s2)+(s0+s1+b2) > 3/2", S + s0 + s1 + b2, three_half, ">"),
        ("s1+s2>-b0", "s1+s2 > -b0", s1 + s2, -b0, ">"),
        ("s0+s2>-b1", "s0+s2 > -b1", s0 + s2, -b1, ">"),
        ("s0+s1>-b2", "s0+s1 > -b2", s0 + s1, -b2, ">"),
        ("s1+s2>=0", "s1+s2 >= 0", s1 + s2, 0, ">="),
        ("s0+s2>=0", "s0+s2 >= 0", s0 + s2, 0, ">="),
        ("s0+s1>=0", "s0+s1 >= 0", s0 + s1, 0, ">="),
    ]
    return out


AFS_CONDITION_IDS = tuple(c[0] for c in afs_conditions(AfsSextuple(0, 0, 0, 0, 0, 0)))

# condition ids exchanged by swapping the two factors
SWAP_IDS = {
    "b0+b1>0": "b0+b2>0", "b0+b2>0": "b0+b1>0",
    "S>3/2-(b0+b1)": "S>3/2-(b0+b2)", "S>3/2-(b0+b2)": "S>3/2-(b0+b1)",
    "S>1-b1": "S>1-b2", "S>1-b2": "S>1-b1",
    "S+(s0+s2+b1)>3/2": "S+(s0+s1+b2)>3/2", "S+(s0+s1+b2)>3/2": "S+(s0+s2+b1)>3/2",
    "s0+s2>-b1": "s0+s1>-b2", "s0+s1>-b2": "s0+s2>-b1",
    "s0+s2>=0": "s0+s1>=0", "s0+s1>=0": "s0+s2>=0",
}


def _require_affine(values, domain: Domain) -> None:
    if isinstance(domain, Interval) and domain.lo != domain.hi:
        for name, v in zip(SLOTS, values):
            if not v.is_affine():
                raise UnsupportedShapeError(f"{name} = {v} is not affine in s")


def afs_check(x: AfsSextuple, domain: Domain) -> ConditionReport:
    """Decide every condition of the bilinear estimate on ``domain``."""
    domain = as_domain(domain)
    _require_affine(x.values(), domain)
    if isinstance(domain, Interval):
        rows = afs_conditions(x)
    else:
        # at a point the bookkeeping runs on plain eps exponents
        rows = _condition_rows([v.at(domain) for v in x.values()])
    conds = tuple(check(cid, text, lhs, rhs, rel, domain) for cid, text, lhs, rhs, rel in rows)
    return ConditionReport("bilinear wave-Sobolev estimate", domain_label(domain), conds, (EDITORIAL_NOTE,))


class ProductVariant(enum.Enum):
    INHOMOGENEOUS_A = "inhomogeneous_a"
    HOMOGENEOUS_B = "homogeneous_b"


def sobolev_product_check(s0, s1, s2, variant: ProductVariant, domain: Domain) -> ConditionReport:
    """Sobolev multiplication law, strict-sum (a) or scaling-exact (b) form."""
    domain = as_domain(domain)
    s0, s1, s2 = as_param(s0), as_param(s1), as_param(s2)
    _require_affine((s0, s1, s2), domain)
    variant = ProductVariant(variant)
    S = s0 + s1 + s2
    half = Fraction(3, 2)
    pairs = (("s0+s1", s0 + s1), ("s0+s2", s0 + s2), ("s1+s2", s1 + s2))
    if variant is ProductVariant.INHOMOGENEOUS_A:
        conds = [check("S>3/2", "s0+s1+s2 > 3/2", S, half, ">", domain)]
        conds += [check(f"{n}>=0", f"{n} >= 0", v, 0, ">=", domain) for n, v in pairs]
    else:
        conds = [check("S=3/2", "s0+s1+s2 = 3/2", S, half, "==", domain)]
        conds += [check(f"{n}>0", f"{n} > 0", v, 0, ">", domain) for n, v in pairs]
    return ConditionReport(f"Sobolev product law ({variant.value})", domain_label(domain), tuple(conds))


# ---------------------------------------------------------------------------
# Feasibility over epsilon orders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FreeSlot:
    """A slot whose eps order may be chosen.

    ``sign`` restricts the order: ``+1`` allows ``1..hi``, ``-1`` allows
    ``lo..-1`` and ``0`` the full range.
    """

    name: str
    sign: int = 0


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    assignment: Optional[dict]
    sextuple: Optional[AfsSextuple]
    report: ConditionReport
    blocking: tuple[str, ...] = ()
    nodes: int = 0


def candidate_orders(sign: int, lo: int, hi: int) -> list[int]:
    """Enumeration order for one slot: ``0, 1, -1, 2, -2, ...`` within the allowed set.

    This is the order in which solutions count as "smallest".
    """
    out = [0]
    for k in range(1, max(abs(lo), abs(hi)) + 1):
        out += [k, -k]
    allowed = [o for o in out if lo <= o <= hi]
    if sign > 0:
        return [o for o in allowed if o > 0]
    if sign < 0:
        return [o for o in allowed if o < 0]
    return allowed


def _linear_form(margin_of, names: list[str]) -> tuple[Fraction, list[Fraction]]:
    zero = {n: 0 for n in names}
    c0 = margin_of(zero)
    coefs = []
    for n in names:
        unit = dict(zero)
        unit[n] = 1
        coefs.append(margin_of(unit) - c0)
    return c0, coefs


def afs_feasible(partial: AfsSextuple, free: Sequence[FreeSlot], domain: Domain,
                 order_range: tuple[int, int] = (-8, 8)) -> FeasibilityResult:
    """Choose eps orders for the ``free`` slots so that :func:`afs_check` passes.

    Returns the first solution in the order given by :func:`candidate_orders`,
    slot by slot in the order ``s0, s1, s2, b0, b1, b2``, or certifies that
    none exists in ``order_range``.
    """
    domain = as_domain(domain)
    lo, hi = order_range
    free = sorted(free, key=lambda f: SLOTS.index(f.name))
    names = [f.name for f in free]
    if len(set(names)) != len(names):
        raise ValueError("a slot is listed as free twice")
    conds = afs_conditions(partial)
    constraints = []  # (id, c0, coefs, strict)
    never = []
    for cid, _text, lhs, rhs, rel in conds:
        margin = ParamExponent.lift(lhs) - ParamExponent.lift(rhs)
        strict = rel == ">"
        if decide(margin.with_order(-1), strict, domain).satisfied:
            continue  # holds whatever the eps orders
        if not decide(margin.with_order(1), strict, domain).satisfied:
            never.append(cid)
            continue

        def margin_of(orders, cid=cid):
            x = partial.with_orders(orders)
            row = next(c for c in afs_conditions(x) if c[0] == cid)
            return (ParamExponent.lift(row[2]) - ParamExponent.lift(row[3])).eps_order

        c0, coefs = _linear_form(margin_of, names)
        constraints.append((cid, c0, coefs, strict))

    cands = [candidate_orders(f.sign, lo, hi) for f in free]
    if never or any(not c for c in cands):
        return FeasibilityResult(False, None, None, afs_check(partial, domain), tuple(never))

    def ok(total: Fraction, strict: bool) -> bool:
        return total > 0 if strict else total >= 0

    # best achievable contribution of slots i.. for each constraint
    def tail_max(coefs, i):
        return sum(max(c * o for o in cands[j]) for j, c in enumerate(coefs) if j >= i)

    tails = [[tail_max(coefs, i) for i in range(len(names) + 1)] for _cid, _c0, coefs, _st in constraints]
    nodes = 0
    chosen: list[int] = []

    def dfs(i: int, partial_sums: list[Fraction]) -> bool:
        nonlocal nodes
        nodes += 1
        for k, (_cid, c0, _coefs, strict) in enumerate(constraints):
            if not ok(c0 + partial_sums[k] + tails[k][i], strict):
                return False
        if i == len(names):
            return True
        for o in cands[i]:
            chosen.append(o)
            sums = [partial_sums[k] + coefs[i] * o for k, (_c, _c0, coefs, _s) in enumerate(constraints)]
            if dfs(i + 1, sums):
                return True
            chosen.pop()
        return False

    if dfs(0, [Fraction(0)] * len(constraints)):
        assignment = dict(zip(names, chosen))
        x = partial.with_orders(assignment)
        report = afs_check(x, domain)
        if not report.passed:  # pragma: no cover - guarded by construction
            raise AssertionError("feasibility search returned a failing assignment")
        return FeasibilityResult(True, assignment, x, report, (), nodes)
    blocking = tuple(cid for cid, *_ in constraints)
    return FeasibilityResult(False, None, None, afs_check(partial, domain), blocking, nodes)


def brute_force_feasible(partial: AfsSextuple, free: Sequence[FreeSlot], domain: Domain,
                         order_range: tuple[int, int] = (-8, 8)) -> Optional[dict]:
    """Reference enumeration in the same candidate order; meant for small slot counts."""
    free = sorted(free, key=lambda f: SLOTS.index(f.name))
    cands = [candidate_orders(f.sign, *order_range) for f in free]
    for combo in itertools.product(*cands):
        assignment = dict(zip((f.name for f in free), combo))
        if afs_check(partial.with_orders(assignment), domain).passed:
            return assignment
    return None
