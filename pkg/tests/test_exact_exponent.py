from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from exponent_lab.exact import (
    EpsExponent,
    ExpressionError,
    ParamExponent,
    RatFn,
    eps_compare,
    parse_exponent,
    parse_interval,
    parse_rational,
    parse_value,
)

S = RatFn.s()
fracs = st.fractions(min_value=-3, max_value=3, max_denominator=6)
eps_exps = st.builds(EpsExponent, fracs, st.integers(-3, 3).map(Fraction))


def _random_eps(rng: random.Random) -> EpsExponent:
    return EpsExponent(Fraction(rng.randint(-6, 6), rng.randint(1, 4)), rng.randint(-3, 3))


def test_total_order_laws_ten_thousand_triples():
    rng = random.Random(20240501)
    for _ in range(10_000):
        a, b, c = _random_eps(rng), _random_eps(rng), _random_eps(rng)
        # totality and antisymmetry
        assert (a <= b) or (b <= a)
        if a <= b and b <= a:
            assert a == b
        # transitivity
        if a <= b and b <= c:
            assert a <= c
        # compatibility with addition
        if a <= b:
            assert a + c <= b + c
        assert eps_compare(a, b) == -eps_compare(b, a)
        assert (eps_compare(a, b) == 0) == (a == b)


@given(eps_exps, eps_exps)
def test_order_is_lexicographic(a, b):
    assert (a < b) == ((a.base, a.eps_order) < (b.base, b.eps_order))


@given(eps_exps, eps_exps)
def test_group_laws(a, b):
    assert a + b == b + a
    assert a - b + b == a
    assert -(-a) == a
    assert (a - a).sign() == 0


def test_sign_and_str():
    assert EpsExponent(0, -1).sign() == -1
    assert EpsExponent(Fraction(1, 4), -2).sign() == 1
    assert str(EpsExponent(Fraction(1, 4), -2)) == "1/4 - 2eps"
    assert str(EpsExponent(Fraction(3, 4), 1)) == "3/4 + eps"


def test_scale_with_fraction_order():
    assert EpsExponent(1, 1).scale(Fraction(1, 3)) == EpsExponent(Fraction(1, 3), Fraction(1, 3))


def test_param_exponent_evaluation():
    p = ParamExponent(S * S, -1)
    assert p.at(Fraction(1, 2)) == EpsExponent(Fraction(1, 4), -1)
    assert not p.is_affine() and ParamExponent(2 * S + 1).is_affine()
    with pytest.raises(TypeError):
        EpsExponent.lift(p)


class TestParse:
    def test_examples(self):
        assert parse_value("1/4 - 2e") == ParamExponent(RatFn.lift(Fraction(1, 4)), -2)
        assert parse_value("5s/3 - 2") == ParamExponent(Fraction(5, 3) * S - 2)
        assert parse_value("0.95") == ParamExponent(RatFn.lift(Fraction(19, 20)))
        assert parse_value("s^2/3") == ParamExponent(S * S / 3)
        assert parse_value("1/4+3ε") == ParamExponent(RatFn.lift(Fraction(1, 4)), 3)
        assert parse_value("2(1-s)") == ParamExponent(2 - 2 * S)

    def test_trailing_marker(self):
        p = parse_exponent("3/4+")
        assert p.free_sign == 1 and p.value.eps_order == 1
        m = parse_exponent("1/2 −")
        assert m.free_sign == -1 and m.value.eps_order == -1
        with pytest.raises(ExpressionError):
            parse_value("3/4+")

    @pytest.mark.parametrize("bad", ["", "s*e", "e/s", "foo", "1e5x", "2**s", "(s", "1/(s-s)"])
    def test_rejects(self, bad):
        with pytest.raises((ExpressionError, ZeroDivisionError)):
            parse_value(bad)

    def test_intervals_and_rationals(self):
        iv = parse_interval("(3/4, 1]")
        assert iv.lo_open and not iv.hi_open and iv.lo == Fraction(3, 4)
        assert str(parse_interval("0.9:1")) == "[9/10, 1]"
        assert parse_rational("19/20") == parse_rational("0.95")
        with pytest.raises(ExpressionError):
            parse_rational("s")
        with pytest.raises(ExpressionError):
            parse_interval("[1, 0]")
