from __future__ import annotations

from fractions import Fraction

import pytest
import sympy

from exponent_lab import lorenz
from exponent_lab.bootstrap import DomainError
from exponent_lab.exact import Poly, RatFn, Sign, ratfn_equal

s = sympy.Symbol("s")
x = sympy.Symbol("x")
HALF = sympy.Rational(1, 2)
SHIFT = HALF - (1 - s) / 3


def sym(f: RatFn):
    def poly(p: Poly):
        return sum((sympy.Rational(c.numerator, c.denominator) * s**i for i, c in enumerate(p.coeffs)),
                   sympy.Integer(0))
    return poly(f.num) / poly(f.den)


def same(f: RatFn, expr) -> bool:
    return sympy.simplify(sym(f) - expr) == 0


def oracle_step(r, rt):
    """The four interleaved updates, written independently of the package."""
    q = rt + SHIFT
    r_next = (sympy.Rational(5, 2) - 3 * s + (2 * s - 1) * q) / 2
    qt = r_next + SHIFT
    rt_next = (3 * (1 - s) * (sympy.Rational(3, 2) - qt) + HALF * (s - 2 + 2 * qt)) / (1 + s)
    return r_next, rt_next, q, qt


def oracle_limits():
    r, rt = sympy.symbols("r rt")
    r1, rt1, _q, _qt = oracle_step(r, rt)
    sol = sympy.solve([sympy.Eq(r, r1), sympy.Eq(rt, rt1)], [r, rt], dict=True)[0]
    q_inf = sol[rt] + SHIFT
    return sympy.simplify(sol[r]), sympy.simplify(sol[rt]), sympy.simplify(q_inf)


def oracle_sinf():
    _r, _rt, q = oracle_limits()
    theta = HALF / (sympy.Rational(3, 2) - q)  # modulation 1/2 reached from H^{s,0}
    return sympy.simplify(s - theta * (2 * q - 1))


def test_rtilde_update_three_ways():
    qt = RatFn.s() / 3 + Fraction(1, 5)
    a = lorenz.rtilde_from_qtilde(qt)
    assert ratfn_equal(a, lorenz.rtilde_by_interpolation(qt))
    t = sympy.Symbol("t")
    want = (3 * (1 - s) * (sympy.Rational(3, 2) - t) + HALF * (s - 2 + 2 * t)) / (1 + s)
    got = (sympy.Rational(7, 2) - 4 * s + (3 * s - 2) * t) / (1 + s)
    assert sympy.simplify(want - got) == 0


def test_doubled_rtilde_variant_is_inconsistent():
    """The variant with 2/r~ on the left would halve the update and move the fixed point."""
    r, rt = sympy.symbols("r rt")
    r_next, _rt_next, _q, qt = oracle_step(r, rt)
    rt_half = (sympy.Rational(7, 2) - 4 * s + (3 * s - 2) * qt) / (2 * (1 + s))
    sol = sympy.solve([sympy.Eq(r, r_next), sympy.Eq(rt, rt_half)], [r, rt], dict=True)[0]
    assert not same(lorenz.PRINTED_RINF, sol[r])


def test_composed_map_matches_printed():
    alpha, beta = lorenz.composed_map()
    assert ratfn_equal(alpha, lorenz.PRINTED_ALPHA)
    r = RatFn.s() / 7
    assert ratfn_equal(alpha * r + beta, lorenz.printed_composed_map(r))
    assert same(alpha, (2 * s - 1) * (3 * s - 2) / (2 * (1 + s)))


def test_limits_against_oracle():
    lim = lorenz.lorenz_limits()
    r_inf, rt_inf, q_inf = oracle_limits()
    assert same(lim.inv_r_inf, r_inf) and same(lim.inv_rtilde_inf, rt_inf) and same(lim.inv_q_inf, q_inf)
    assert ratfn_equal(lim.inv_r_inf, lorenz.PRINTED_RINF)
    assert ratfn_equal(lim.inv_q_inf, lorenz.PRINTED_QINF)
    fixed = lorenz.lorenz_step(lim.as_state())
    assert ratfn_equal(fixed.inv_r, lim.inv_r_inf) and ratfn_equal(fixed.inv_rtilde, lim.inv_rtilde_inf)


def test_s_infinity_against_oracle():
    si = lorenz.lorenz_s_infinity()
    assert same(si.value, oracle_sinf())
    assert si.value(1) == 1
    assert si.value(Fraction(19, 20)) == Fraction(7521, 8680)
    assert si.value(Fraction(9, 10)) == Fraction(761, 1040)


def test_threshold_cubic_and_root():
    th = lorenz.lorenz_threshold()
    assert th.polynomial.proportional_to(Poly([5, 106, -152, 32]))
    assert Fraction(906, 1000) < th.bracket.lo and th.bracket.hi < Fraction(907, 1000)
    assert th.bracket.width <= Fraction(1, 10**10)
    roots = sorted(float(r) for r in sympy.Poly(32 * s**3 - 152 * s**2 + 106 * s + 5, s).nroots())
    assert [abs(float(b.approx) - r) < 1e-9 for b, r in zip(th.roots, roots)] == [True] * 3
    num = sympy.fraction(sympy.together(oracle_sinf() - sympy.Rational(3, 4)))[0]
    assert sympy.simplify(sympy.Poly(num, s).monic() - sympy.Poly(32 * s**3 - 152 * s**2 + 106 * s + 5, s).monic()) == 0


def test_threshold_direction():
    d = lorenz.lorenz_threshold().direction
    assert d["sinf_at_19/20>3/4"] is True and d["sinf_at_9/10>3/4"] is False
    assert d["satisfied_when"] == "cubic < 0" and d["satisfied_side"] == "s > root"
    c = Poly([5, 106, -152, 32])
    assert c(Fraction(19, 20)) < 0 < c(Fraction(9, 10))


def test_walk_at_one():
    st = lorenz.LorenzState(1, *lorenz.lorenz_seeds(1))
    assert st.inv_rtilde == Fraction(1, 12)
    nxt = lorenz.lorenz_step(st, Fraction(1))
    assert (nxt.inv_q, nxt.inv_r, nxt.inv_qtilde, nxt.inv_rtilde) == (
        Fraction(7, 12), Fraction(1, 24), Fraction(13, 24), Fraction(1, 48))
    assert lorenz.lorenz_limits(1).alpha == Fraction(1, 4)


def test_step_matches_oracle_at_points():
    for sv in (Fraction(4, 5), Fraction(19, 20)):
        r, rt = lorenz.lorenz_seeds(sv)
        st = lorenz.LorenzState(1, r, rt)
        sr, srt = sympy.Rational(r.numerator, r.denominator), sympy.Rational(rt.numerator, rt.denominator)
        for _ in range(4):
            st = lorenz.lorenz_step(st, sv)
            sr, srt, _q, _qt = (v.subs(s, sympy.Rational(sv.numerator, sv.denominator))
                                for v in oracle_step(sr, srt))
            assert sympy.Rational(st.inv_r.numerator, st.inv_r.denominator) == sr
            assert sympy.Rational(st.inv_rtilde.numerator, st.inv_rtilde.denominator) == srt


@pytest.mark.parametrize("sv", [Fraction(4, 5), Fraction(23, 25), Fraction(19, 20), Fraction(1)])
def test_gap_ratio_is_alpha_from_k2(sv):
    tr = lorenz.lorenz_trace(sv, 14, None)
    alpha = (2 * sv - 1) * (3 * sv - 2) / (2 * (1 + sv))
    assert all(r == alpha for r in tr.gap_ratios(start=2))
    assert tr.contraction == alpha


def test_trace_domain_and_stop():
    with pytest.raises(DomainError):
        lorenz.lorenz_trace(Fraction(3, 4))
    tr = lorenz.lorenz_trace(Fraction(19, 20), 60)
    assert tr.converged and tr.rows[-1].gap < Fraction(1, 10**15)


def test_appendix_52_all_pass_without_mixed():
    rep = lorenz.verify_appendix_52()
    assert rep.passed
    assert not any((c.verdict or "").startswith(Sign.MIXED.value) for c in rep.conditions)
    for cid in ("A4.base.reduced", "Q.reduced", "A3.step.alpha<1"):
        assert rep.get(cid).satisfied
    assert all(c.satisfied for c in rep.informational)
    assert lorenz.contraction_report().passed


def test_monotone_probe():
    grid = [Fraction(9, 10) + Fraction(i, 100) for i in range(11)]
    assert all(ok for _s, ok in lorenz.lorenz_monotone_probe(grid, 20))
