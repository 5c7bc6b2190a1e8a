from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from exponent_lab.exact import (
    DegenerateMapError,
    Interval,
    Poly,
    RatFn,
    affine_fixed_point,
    as_fraction,
    count_roots,
    isolate_and_refine_root,
    ratfn_equal,
    sturm_sequence,
)

x = sympy.Symbol("s")
S = RatFn.s()
small = st.fractions(min_value=-5, max_value=5, max_denominator=12)
coeff_lists = st.lists(small, min_size=1, max_size=6)


def to_sympy(p: Poly):
    return sympy.expand(sum((sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(p.coeffs)),
                            sympy.Integer(0)))


def from_sympy(expr) -> Poly:
    coeffs = sympy.Poly(expr, x).all_coeffs()[::-1]
    return Poly(Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in coeffs)


def test_as_fraction_rejects_float_and_bool():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(TypeError):
        as_fraction(True)
    assert as_fraction("3/4") == Fraction(3, 4)


def test_trailing_zeros_trimmed_and_degree():
    p = Poly([1, 2, 0, 0])
    assert p.degree == 1
    assert Poly([]).is_zero() and Poly([0, 0]).is_zero()


@given(coeff_lists, coeff_lists)
@settings(max_examples=60, deadline=None)
def test_arithmetic_matches_sympy(a, b):
    p, q = Poly(a), Poly(b)
    assert to_sympy(p + q).expand() == (to_sympy(p) + to_sympy(q)).expand()
    assert to_sympy(p * q).expand() == (to_sympy(p) * to_sympy(q)).expand()
    if not q.is_zero():
        quo, rem = p.divmod(q)
        assert (quo * q + rem) == p
        assert rem.is_zero() or rem.degree < q.degree


@given(coeff_lists, coeff_lists)
@settings(max_examples=60, deadline=None)
def test_gcd_matches_sympy(a, b):
    p, q = Poly(a), Poly(b)
    if p.is_zero() or q.is_zero():
        return
    g = p.gcd(q)
    want = sympy.gcd(to_sympy(p), to_sympy(q))
    assert g.proportional_to(from_sympy(want)) or (g.degree == 0 and sympy.degree(want, x) == 0)


def test_derivative_compose_and_squarefree():
    p = Poly.from_roots([1, 1, 2])
    assert p.derivative() == Poly([5, -8, 3])
    assert p.squarefree_part().proportional_to(Poly.from_roots([1, 2]))
    q = Poly([0, 1, 1])  # s + s^2
    assert q.compose(Poly([1, 1])) == Poly([2, 3, 1])


def test_content_normalized_is_primitive_integer():
    p = Poly([Fraction(39, 8), Fraction(-50, 8), 1])
    assert p.content_normalized() == Poly([39, -50, 8])


@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=8), min_size=1, max_size=5, unique=True))
@settings(max_examples=60, deadline=None)
def test_sturm_count_matches_exact_roots(roots):
    p = Poly.from_roots(roots)
    lo, hi = Fraction(-4), Fraction(4)
    assert count_roots(p, lo, hi) == len(roots)
    found = isolate_and_refine_root(p, Interval(lo, hi), tol=Fraction(1, 10**6))
    assert len(found) == len(roots)
    for r, br in zip(sorted(roots), found):
        assert br.bracket.lo <= r <= br.bracket.hi


def test_irrational_roots_against_mpmath():
    import mpmath

    mpmath.mp.dps = 40
    p = Poly([39, -50, 8])
    br = isolate_and_refine_root(p, Interval(0, 1), tol=Fraction(1, 10**20))
    assert len(br) == 1
    exact = (25 - mpmath.sqrt(313)) / 8
    assert mpmath.mpf(br[0].bracket.lo.numerator) / br[0].bracket.lo.denominator <= exact
    assert exact <= mpmath.mpf(br[0].bracket.hi.numerator) / br[0].bracket.hi.denominator
    assert br[0].bracket.width <= Fraction(1, 10**20)


def test_random_real_root_counts_against_sympy():
    rng = random.Random(7)
    for _ in range(40):
        coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(rng.randint(2, 6))]
        p = Poly(coeffs)
        if p.degree < 1:
            continue
        want = [r for r in sympy.Poly(to_sympy(p), x).real_roots() if -3 < r <= 3]
        assert count_roots(p, -3, 3) == len(set(want))


def test_sturm_sequence_ends_in_constant():
    seq = sturm_sequence(Poly([5, 106, -152, 32]))
    assert seq[-1].degree == 0


def test_ratfn_normalization_and_equality():
    f = (S * S - 1) / (S - 1)
    assert f.is_poly() and f == S + 1
    assert ratfn_equal((1 - S) / (3 - 2 * S), (S - 1) / (2 * S - 3))
    assert RatFn.lift(Fraction(1, 2)).is_const()
    assert (S / (S + 1))(1) == Fraction(1, 2)


def test_ratfn_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        S / RatFn.lift(0)


def test_affine_fixed_point():
    fp = affine_fixed_point(S - Fraction(1, 2), (1 - S) * (7 - 2 * S) / 6)
    assert ratfn_equal((S - Fraction(1, 2)) * fp + (1 - S) * (7 - 2 * S) / 6, fp)
    with pytest.raises(DegenerateMapError):
        affine_fixed_point(RatFn.lift(1), RatFn.lift(2))
