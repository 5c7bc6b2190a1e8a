from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exponent_lab.exact import (
    EpsExponent,
    Interval,
    ParamExponent,
    Poly,
    RatFn,
    Sign,
    decide,
    ratfn_sign_on_interval,
    sign_on_interval,
)

S = RatFn.s()


def dense_signs(p: Poly, iv: Interval, n: int = 1000) -> set[int]:
    """Independent oracle: exact signs on a uniform grid plus the closed endpoints that belong."""
    pts = [iv.lo + (iv.hi - iv.lo) * Fraction(i, n) for i in range(n + 1)]
    return {p.sign_at(t) for t in pts if iv.contains(t)}


def test_basic_verdicts():
    iv = Interval(Fraction(3, 4), 1)
    assert sign_on_interval(Poly([1, 0, 1]), iv).kind is Sign.POSITIVE
    assert sign_on_interval(Poly([-1]), iv).kind is Sign.NEGATIVE
    assert sign_on_interval(Poly([]), iv).kind is Sign.ZERO
    v = sign_on_interval(Poly([-Fraction(9, 10), 1]), iv)
    assert v.kind is Sign.MIXED and v.witness_pos is not None and v.witness_neg is not None


def test_zero_at_endpoint_strict_and_nonstrict():
    iv = Interval(Fraction(3, 4), 1)
    p = Poly([1, -1])  # 1 - s, zero at s = 1
    strict = sign_on_interval(p, iv, strict=True)
    assert strict.kind is Sign.MIXED and strict.witness == 1
    loose = sign_on_interval(p, iv, strict=False)
    assert loose.kind is Sign.POSITIVE and [z.approx for z in loose.zeros] == [1]
    open_hi = sign_on_interval(p, Interval(Fraction(3, 4), 1, hi_open=True), strict=True)
    assert open_hi.kind is Sign.POSITIVE


def test_double_root_touching_zero():
    p = Poly.from_roots([Fraction(5, 6), Fraction(5, 6)])
    iv = Interval(Fraction(3, 4), 1)
    assert sign_on_interval(p, iv, strict=False).kind is Sign.POSITIVE
    assert sign_on_interval(p, iv, strict=True).kind is Sign.MIXED


def test_point_interval():
    p = Poly([-1, 1])
    assert sign_on_interval(p, Interval.point(1)).kind is Sign.ZERO
    assert sign_on_interval(p, Interval.point(2)).kind is Sign.POSITIVE


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=6),
       st.fractions(min_value=-2, max_value=2, max_denominator=8),
       st.fractions(min_value=Fraction(1, 8), max_value=3, max_denominator=8))
@settings(max_examples=150, deadline=None)
def test_sign_agrees_with_dense_sampling(coeffs, lo, width):
    p = Poly(coeffs)
    iv = Interval(lo, lo + width)
    v = sign_on_interval(p, iv, strict=False)
    seen = dense_signs(p, iv)
    if v.kind is Sign.POSITIVE:
        assert -1 not in seen
    elif v.kind is Sign.NEGATIVE:
        assert 1 not in seen
    elif v.kind is Sign.ZERO:
        assert seen == {0}
    else:
        # a sign change may hide between grid points; the witnesses are exact
        assert p.sign_at(v.witness_pos) > 0 and p.sign_at(v.witness_neg) < 0
    if seen >= {1, -1}:
        assert v.kind is Sign.MIXED


def test_dense_sampling_on_lemma_polynomials():
    iv = Interval(Fraction(3, 4), 1)
    cases = [
        (Poly([Fraction(-1, 12), Fraction(1, 2), -1, Fraction(2, 3)]), Sign.POSITIVE),
        (Poly([Fraction(5, 2), -2, -2]), Sign.NEGATIVE),
        (Poly([5, 106, -152, 32]), Sign.MIXED),
    ]
    for p, kind in cases:
        v = sign_on_interval(p, iv)
        assert v.kind is kind
        seen = dense_signs(p, iv)
        if kind is Sign.POSITIVE:
            assert seen == {1}
        elif kind is Sign.NEGATIVE:
            assert seen == {-1}
        else:
            assert seen >= {1, -1}


def test_ratfn_sign_and_pole():
    iv = Interval(Fraction(3, 4), 1)
    f = (1 - S) / (S - Fraction(5, 2))
    assert ratfn_sign_on_interval(f, iv, strict=False).kind is Sign.NEGATIVE
    with pytest.raises(ZeroDivisionError):
        ratfn_sign_on_interval(1 / (S - Fraction(9, 10)), iv)


class TestDecide:
    iv = Interval(Fraction(3, 4), 1)

    def test_point_lexicographic(self):
        assert decide(EpsExponent(0, 1), True, Fraction(1)).satisfied
        assert not decide(EpsExponent(0, 0), True, Fraction(1)).satisfied
        assert decide(EpsExponent(0, 0), False, Fraction(1)).satisfied
        assert not decide(EpsExponent(0, -1), False, Fraction(1)).satisfied
        assert decide(EpsExponent(Fraction(1, 10**9), -100), True, Fraction(1)).satisfied

    def test_interval_zero_inside_rescued_by_eps(self):
        m = ParamExponent(1 - S, 1)
        assert decide(m, True, self.iv).satisfied
        d = decide(ParamExponent(1 - S, 0), True, self.iv)
        assert not d.satisfied and d.witness == 1
        assert decide(ParamExponent(1 - S, 0), False, self.iv).satisfied
        assert not decide(ParamExponent(1 - S, -1), False, self.iv).satisfied

    def test_identically_zero_base(self):
        assert decide(ParamExponent(S - S, 1), True, self.iv).satisfied
        assert not decide(ParamExponent(S - S, 0), True, self.iv).satisfied

    def test_mixed_has_failing_witness(self):
        d = decide(ParamExponent(S - Fraction(9, 10), 5), True, self.iv)
        assert not d.satisfied and d.witness < Fraction(9, 10)

    def test_pole_raises(self):
        with pytest.raises(ZeroDivisionError):
            decide(ParamExponent(1 / (S - Fraction(4, 5)), 0), True, self.iv)

    def test_random_points_agree_with_interval(self):
        rng = random.Random(3)
        for _ in range(200):
            a, b = Fraction(rng.randint(-4, 4), 3), Fraction(rng.randint(-4, 4), 5)
            m = ParamExponent(a + b * S, rng.randint(-1, 1))
            whole = decide(m, True, self.iv).satisfied
            pts = [self.iv.lo + Fraction(i, 40) * self.iv.width for i in range(41)]
            each = all(decide(m, True, t).satisfied for t in pts)
            # affine margins take extremes at the endpoints, which are sampled
            assert whole == each
