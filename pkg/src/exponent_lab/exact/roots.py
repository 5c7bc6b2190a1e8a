"""Sturm-sequence root isolation and exact sign determination on intervals.

Everything here is decided in exact rational arithmetic.  Bisection points are
dyadic-ish rationals, Sturm counts certify how many distinct roots a bracket
holds, and nothing is ever concluded from a floating point evaluation.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .polynomial import Number, Poly, as_fraction
from .ratfunc import RatFn


@dataclass(frozen=True)
class Interval:
    """``[lo, hi]`` with optionally excluded endpoints.

    The open flags let strict hypotheses such as ``s > 3/4`` be checked
    exactly rather than on a perturbed closed interval.
    """

    lo: Fraction
    hi: Fraction
    lo_open: bool = False
    hi_open: bool = False

    def __post_init__(self):
        object.__setattr__(self, "lo", as_fraction(self.lo))
        object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")
        if self.lo == self.hi and (self.lo_open or self.hi_open):
            raise ValueError("degenerate interval cannot have an open endpoint")

    @classmethod
    def closed(cls, lo: Number, hi: Number) -> "Interval":
        return cls(as_fraction(lo), as_fraction(hi))

    @classmethod
    def point(cls, x: Number) -> "Interval":
        x = as_fraction(x)
        return cls(x, x)

    def contains(self, x: Number) -> bool:
        x = as_fraction(x)
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and self.lo_open:
            return False
        if x == self.hi and self.hi_open:
            return False
        return True

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def sample_points(self, n: int = 3) -> list[Fraction]:
        """``n`` rational points inside the interval, endpoints included when closed."""
        if self.lo == self.hi:
            return [self.lo]
        pts = []
        for i in range(n):
            x = self.lo + self.width * Fraction(i, max(n - 1, 1))
            if self.contains(x):
                pts.append(x)
        if not pts:
            pts.append(self.midpoint)
        return pts

    def __str__(self) -> str:
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{self.lo}, {self.hi}{right}"


# ClosedInterval is the common case; kept as a name for readability at call sites.
def ClosedInterval(lo: Number, hi: Number) -> Interval:
    return Interval.closed(lo, hi)


# ---------------------------------------------------------------------------
# Sturm machinery
# ---------------------------------------------------------------------------


def sturm_sequence(p: Poly) -> list[Poly]:
    """Sturm chain of the square-free part of ``p``."""
    f = p.squarefree_part()
    seq = [f, f.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _variations(seq: list[Poly], x: Fraction) -> int:
    signs = [q.sign_at(x) for q in seq]
    signs = [v for v in signs if v]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p: Poly, a: Number, b: Number, seq: Optional[list[Poly]] = None) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval ``(a, b]``."""
    a, b = as_fraction(a), as_fraction(b)
    if a >= b:
        return 0
    seq = seq if seq is not None else sturm_sequence(p)
    return _variations(seq, a) - _variations(seq, b)


@dataclass(frozen=True)
class RootBracket:
    """One certified root: the bracket holds exactly one distinct root of ``p``."""

    bracket: Interval
    approx: Fraction
    exact: bool = False

    def contains(self, x: Number) -> bool:
        return self.bracket.lo <= as_fraction(x) <= self.bracket.hi


def _isolate(f: Poly, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction, bool]]:
    """Disjoint isolating intervals for the distinct roots of square-free ``f`` in ``[lo, hi]``.

    Returns sorted triples ``(a, b, exact)``.  Exact roots have ``a == b``;
    otherwise ``f(a)`` and ``f(b)`` are nonzero with opposite signs and the
    open interval ``(a, b)`` holds exactly one root.
    """
    seq = sturm_sequence(f)
    found: list[tuple[Fraction, Fraction, bool]] = []
    if f(lo) == 0:
        found.append((lo, lo, True))
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        n = count_roots(f, a, b, seq)
        if n == 0:
            continue
        fb = f(b)
        if n == 1 and fb == 0:
            found.append((b, b, True))
            continue
        if n == 1 and f(a) != 0:
            found.append((a, b, False))
            continue
        m = (a + b) / 2
        stack.append((a, m))
        stack.append((m, b))
    return sorted(found)


def _refine(f: Poly, a: Fraction, b: Fraction, tol: Fraction) -> tuple[Fraction, Fraction, bool]:
    sa = f.sign_at(a)
    while b - a > tol:
        m = (a + b) / 2
        sm = f.sign_at(m)
        if sm == 0:
            return m, m, True
        if sm == sa:
            a = m
        else:
            b = m
    return a, b, False


def isolate_and_refine_root(p: Poly, interval: Interval, tol: Number = Fraction(1, 10**12)) -> list[RootBracket]:
    """Certified brackets for every distinct real root of ``p`` in ``interval``.

    Each returned bracket holds exactly one root, its width is at most ``tol``,
    and ``approx`` (the bracket midpoint) is within ``tol / 2`` of the root.
    Roots sitting on an excluded endpoint are dropped.
    """
    if p.is_zero():
        raise ValueError("the zero polynomial has no isolated roots")
    tol = as_fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    f = p.squarefree_part()
    result = []
    for a, b, exact in _isolate(f, interval.lo, interval.hi):
        if not exact:
            a, b, exact = _refine(f, a, b, tol)
        if exact:
            if interval.contains(a):
                result.append(RootBracket(Interval(a, a), a, True))
        else:
            result.append(RootBracket(Interval(a, b), (a + b) / 2, False))
    return result


# ---------------------------------------------------------------------------
# Sign determination
# ---------------------------------------------------------------------------


class Sign(enum.Enum):
    POSITIVE = "Positive"
    NEGATIVE = "Negative"
    ZERO = "Zero"
    MIXED = "Mixed"


@dataclass(frozen=True)
class SignVerdict:
    """Outcome of :func:`sign_on_interval`.

    ``zeros`` lists the roots met inside the interval.  For a ``MIXED``
    verdict ``witness`` is a rational point violating the sign suggested by
    the rest of the interval; ``witness_pos``/``witness_neg`` are given when
    the polynomial takes both signs.
    """

    kind: Sign
    strict: bool
    zeros: tuple[RootBracket, ...] = ()
    witness: Optional[Fraction] = None
    witness_pos: Optional[Fraction] = None
    witness_neg: Optional[Fraction] = None

    @property
    def positive(self) -> bool:
        return self.kind is Sign.POSITIVE

    @property
    def negative(self) -> bool:
        return self.kind is Sign.NEGATIVE

    def __str__(self) -> str:
        extra = ""
        if self.kind is Sign.MIXED:
            extra = f"(witness={self.witness})"
        elif self.zeros:
            extra = f"(zeros at {', '.join(str(z.approx) for z in self.zeros)})"
        return f"{self.kind.value}{extra}"


def _segment_samples(f: Poly, interval: Interval, brackets: list[tuple[Fraction, Fraction, bool]]) -> list[Fraction]:
    """One point of the interval in every root-free segment between consecutive roots."""
    brackets = list(brackets)
    # pull inexact brackets off the interval ends so every sample lies inside
    if brackets and not brackets[0][2] and brackets[0][0] == interval.lo:
        a, b, _ = brackets[0]
        while a == interval.lo:
            a, b, _ = _refine(f, a, b, (b - a) / 2)
        brackets[0] = (a, b, False)
    if brackets and not brackets[-1][2] and brackets[-1][1] == interval.hi:
        a, b, _ = brackets[-1]
        while b == interval.hi:
            a, b, _ = _refine(f, a, b, (b - a) / 2)
        brackets[-1] = (a, b, False)
    bounds = [interval.lo]
    for a, b, _ in brackets:
        bounds.extend((a, b))
    bounds.append(interval.hi)
    pts = []
    for i in range(0, len(bounds), 2):
        left, right = bounds[i], bounds[i + 1]
        if left < right:
            pts.append((left + right) / 2)
        elif f(left) != 0 and interval.contains(left):
            pts.append(left)
    return pts


def sign_on_interval(p: Poly, interval: Interval, strict: bool = True) -> SignVerdict:
    """Exact sign of ``p`` over ``interval``.

    With ``strict=True`` a ``POSITIVE``/``NEGATIVE`` verdict means the strict
    sign holds at every point of the interval.  With ``strict=False`` it means
    ``p >= 0`` (resp. ``<= 0``) throughout; zeros are listed in ``zeros``.
    ``ZERO`` is returned when ``p`` vanishes on the whole interval.  A
    ``MIXED`` verdict carries a rational ``witness`` where the claimed sign
    fails (an exact zero, or a point of opposite sign).
    """
    if p.is_zero():
        return SignVerdict(Sign.ZERO, strict)
    if interval.lo == interval.hi:
        v = p.sign_at(interval.lo)
        if v == 0:
            return SignVerdict(Sign.ZERO, strict, (RootBracket(interval, interval.lo, True),))
        return SignVerdict(Sign.POSITIVE if v > 0 else Sign.NEGATIVE, strict)
    f = p.squarefree_part()
    brackets = _isolate(f, interval.lo, interval.hi)
    zeros = tuple(
        RootBracket(Interval(a, b), (a + b) / 2, ex)
        for a, b, ex in brackets
        if not ex or interval.contains(a)
    )
    pts = _segment_samples(f, interval, brackets)
    pos = [x for x in pts if p.sign_at(x) > 0]
    neg = [x for x in pts if p.sign_at(x) < 0]
    if pos and neg:
        return SignVerdict(Sign.MIXED, strict, zeros, witness=neg[0], witness_pos=pos[0], witness_neg=neg[0])
    kind = Sign.POSITIVE if pos else Sign.NEGATIVE
    if zeros and strict:
        exact = [z for z in zeros if z.exact]
        # an irrational zero has no rational witness; its bracket midpoint stands in
        witness = exact[0].approx if exact else zeros[0].approx
        return SignVerdict(Sign.MIXED, strict, zeros, witness=witness,
                           witness_pos=pos[0] if pos else None, witness_neg=neg[0] if neg else None)
    return SignVerdict(kind, strict, zeros)


def ratfn_sign_on_interval(f: RatFn, interval: Interval, strict: bool = True) -> SignVerdict:
    """Sign of a rational function whose denominator has no root in ``interval``."""
    dv = sign_on_interval(f.den, Interval(interval.lo, interval.hi), strict=True)
    if dv.kind not in (Sign.POSITIVE, Sign.NEGATIVE):
        raise ZeroDivisionError(f"denominator {f.den} vanishes on {interval}")
    num = f.num if dv.positive else -f.num
    return sign_on_interval(num, interval, strict)
