from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
import sympy

from exponent_lab import coulomb
from exponent_lab.bootstrap import DomainError, q_from_r
from exponent_lab.exact import Poly, RatFn, Sign, ratfn_equal

s = sympy.Symbol("s")
x = sympy.Symbol("x")
SHIFT = sympy.Rational(1, 2) - (1 - s) / 3


def sym(f: RatFn):
    """RatFn to sympy, for comparison with the oracle expressions below."""
    def poly(p: Poly):
        return sum((sympy.Rational(c.numerator, c.denominator) * s**i for i, c in enumerate(p.coeffs)),
                   sympy.Integer(0))
    return poly(f.num) / poly(f.den)


def same(f: RatFn, expr) -> bool:
    return sympy.simplify(sym(f) - expr) == 0


def oracle_step(t):
    """Solve the implicit interpolation equation for the next inverse exponent."""
    q = t + SHIFT
    eq = sympy.Eq(2 * x, 2 - 2 * s + (sympy.Rational(1, 2) - x) / (sympy.Rational(3, 2) - q) * (2 * q - 1))
    return sympy.solve(eq, x)[0]


def test_step_matches_implicit_oracle():
    t = sympy.Symbol("t")
    assert sympy.simplify(oracle_step(t) - ((s - sympy.Rational(1, 2)) * t + (1 - s) * (7 - 2 * s) / 6)) == 0
    assert same(coulomb.A, s - sympy.Rational(1, 2)) and same(coulomb.B, (1 - s) * (7 - 2 * s) / 6)


def test_step_by_interpolation_agrees():
    t = RatFn.s() / 5 + Fraction(1, 7)
    assert ratfn_equal(coulomb.coulomb_step_implicit(t), coulomb.coulomb_step(t))


def test_seed_rederived():
    assert ratfn_equal(coulomb.seed_by_interpolation(), coulomb.seed_fn())
    assert coulomb.coulomb_seed(1) == Fraction(1, 12)


def test_fixed_point_and_printed_limit():
    lim = coulomb.coulomb_limit()
    fp = sympy.solve(sympy.Eq(x, oracle_step(x)), x)[0]
    assert same(lim.inv_r_inf, fp)
    assert ratfn_equal(lim.inv_r_inf, coulomb.PRINTED_RINF)
    assert ratfn_equal(coulomb.coulomb_step(lim.inv_r_inf), lim.inv_r_inf)
    assert ratfn_equal(lim.inv_q_inf, q_from_r(lim.inv_r_inf))


def test_s_infinity_three_ways():
    si = coulomb.coulomb_s_infinity()
    q_inf = sym(coulomb.coulomb_limit().inv_q_inf)
    theta = sympy.Rational(3, 4) / (sympy.Rational(3, 2) - q_inf)
    assert same(si.value, s - theta * (2 * q_inf - 1))
    assert same(si.value, s - 6 * (1 - s) / (3 * (3 - 2 * s) - 4 * (1 - s)))
    assert ratfn_equal(si.by_interpolation, si.closed_form)


def test_threshold_certified():
    th = coulomb.coulomb_threshold()
    assert th.polynomial.proportional_to(Poly([39, -50, 8]))
    mpmath.mp.dps = 30
    exact = (25 - mpmath.sqrt(313)) / 8
    lo, hi = th.bracket.lo, th.bracket.hi
    assert mpmath.mpf(lo.numerator) / lo.denominator <= exact <= mpmath.mpf(hi.numerator) / hi.denominator
    assert abs(mpmath.mpf(th.approx.numerator) / th.approx.denominator - exact) < 1e-12
    assert th.closed_form_in_bracket and th.direction["holds"]
    assert any("0.91254" in f for f in th.flags)


def test_sympy_threshold_root():
    roots = [r for r in sympy.solve(8 * s**2 - 50 * s + 39, s) if 0.75 < float(r) < 1]
    th = coulomb.coulomb_threshold(Fraction(1, 10**15))
    assert len(roots) == 1 and abs(float(roots[0]) - float(th.approx)) < 1e-14


@pytest.mark.parametrize("sv", [Fraction(4, 5), Fraction(23, 25), Fraction(19, 20), Fraction(1)])
def test_gap_ratio_is_contraction_factor(sv):
    tr = coulomb.coulomb_trace(sv, 12, None)
    assert all(r == sv - Fraction(1, 2) for r in tr.gap_ratios())


def test_trace_exact_rows_and_stop():
    tr = coulomb.coulomb_trace(Fraction(19, 20), 60)
    assert tr.converged and tr.rows[-1].gap < Fraction(1, 10**15)
    full = coulomb.coulomb_trace(Fraction(19, 20), 60, None)
    assert len(full.rows) == 60
    r = full.rows[2]
    assert r.inv_q == r.inv_r + Fraction(1, 2) - Fraction(1, 60)
    assert r.sobolev_index == 2 - Fraction(19, 20) - 2 * r.inv_r


def test_trace_domain():
    with pytest.raises(DomainError):
        coulomb.coulomb_trace(Fraction(3, 4))
    with pytest.raises(DomainError):
        coulomb.coulomb_trace(Fraction(11, 10))


def test_appendix_51_all_pass():
    rep = coulomb.verify_appendix_51()
    assert rep.passed
    assert not any((c.verdict or "").startswith(Sign.MIXED.value) for c in rep.conditions)
    assert rep.get("A1.base.reduced").satisfied
