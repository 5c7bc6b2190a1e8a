from __future__ import annotations

import random
from fractions import Fraction

import pytest

from exponent_lab.exact import EpsExponent, Interval, ParamExponent, RatFn, ratfn_equal
from exponent_lab.spaces import (
    ENDPOINT_NOTE,
    InfeasibleThetaError,
    InterpolationRangeError,
    InvalidConjugateError,
    NotApplicableError,
    SpaceMembership,
    StrichartzPair,
    Theta,
    conjugate,
    interpolate,
    sobolev_embed,
    solve_theta,
    strichartz_admissible,
    strichartz_dual_shift,
    strichartz_forward_shift,
)

S = RatFn.s()
HALF = Fraction(1, 2)
IV = Interval(Fraction(3, 4), 1)


class TestStrichartz:
    def test_interior_pairs(self):
        assert strichartz_admissible(StrichartzPair(Fraction(1, 4), Fraction(1, 4)), 1).passed
        assert strichartz_admissible(StrichartzPair(0, HALF), 1).passed

    def test_q_two_endpoint(self):
        pair = StrichartzPair(HALF, Fraction(1, 4))
        strict = strichartz_admissible(pair, 1)
        assert not strict.passed and [c.id for c in strict.failed] == ["q>2"]
        relaxed = strichartz_admissible(pair, 1, paper_endpoint_convention=True)
        assert relaxed.passed and relaxed.notes == (ENDPOINT_NOTE,)

    def test_rejects_out_of_range(self):
        rep = strichartz_admissible(StrichartzPair(Fraction(1, 3), Fraction(3, 4)), 1)
        assert {c.id for c in rep.failed} == {"r>=2", "sum<=1"}
        assert not strichartz_admissible(StrichartzPair(0, 0), 1).passed

    def test_random_pairs_match_direct_inequalities(self):
        rng = random.Random(11)
        for _ in range(500):
            iq, ir = Fraction(rng.randint(0, 12), 12), Fraction(rng.randint(0, 12), 12)
            want = iq < HALF and 0 < ir <= HALF and HALF <= iq + ir <= 1
            assert strichartz_admissible(StrichartzPair(iq, ir), 1).passed == want

    def test_interval_pair(self):
        # 1/q = 1 - s sits strictly below 1/2 on [3/4, 1]
        assert strichartz_admissible(StrichartzPair(1 - S, Fraction(1, 4) + S / 4), IV).passed


def test_conjugate_involution():
    v = ParamExponent(S / 3, 1)
    assert conjugate(conjugate(v)) == v
    assert conjugate(ParamExponent.lift(Fraction(1, 4))) == ParamExponent.lift(Fraction(3, 4))


class TestShifts:
    def test_dual_shift_formula(self):
        # L^{q'} H^{sigma, r'} with 1/q' = 3/4, 1/r' = 3/4: 1/q = 1/r = 1/4
        m = SpaceMembership.mixed(Fraction(3, 4), S - 1, Fraction(3, 4))
        out = strichartz_dual_shift(m)
        assert ratfn_equal(out.sigma.base, S - Fraction(3, 2)) and out.sigma.eps_order == 0
        assert out.b.base.const_value() == -HALF and out.b.eps_order == -1

    def test_dual_shift_rejects_r_prime_one(self):
        with pytest.raises(InvalidConjugateError):
            strichartz_dual_shift(SpaceMembership.mixed(Fraction(1, 2), 0, 1))
        with pytest.raises(InvalidConjugateError):
            strichartz_dual_shift(SpaceMembership.mixed(Fraction(1, 2), 0, ParamExponent(S, 0)), IV)

    def test_dual_shift_needs_mixed_norm(self):
        with pytest.raises(NotApplicableError):
            strichartz_dual_shift(SpaceMembership.wave(0, HALF))

    def test_forward_then_dual_is_consistent(self):
        m = SpaceMembership.wave(S, ParamExponent.lift(HALF).with_order(1))
        fwd = strichartz_forward_shift(m, Fraction(1, 4), IV, inv_q=Fraction(1, 4))
        assert ratfn_equal(fwd.sigma.base, S - HALF)
        with pytest.raises(NotApplicableError):
            strichartz_forward_shift(SpaceMembership.wave(S, Fraction(1, 4)), Fraction(1, 4), IV)


class TestEmbedding:
    def test_homogeneous_scaling(self):
        src = SpaceMembership.spatial(1, HALF, homogeneous=True)
        assert sobolev_embed(src, Fraction(1, 6), 1).passed
        assert not sobolev_embed(src, Fraction(1, 4), 1).passed

    def test_inhomogeneous_range(self):
        src = SpaceMembership.spatial(S, HALF)
        # 1/p = 1/2 - s/3 is the sharp endpoint
        assert sobolev_embed(src, ParamExponent(HALF - S / 3), IV).passed
        assert sobolev_embed(src, ParamExponent(Fraction(1, 3)), IV).passed
        rep = sobolev_embed(src, ParamExponent(Fraction(1, 6)), IV)
        assert not rep.passed and rep.get("sobolev").witness is not None

    def test_requires_spatial(self):
        with pytest.raises(NotApplicableError):
            sobolev_embed(SpaceMembership.wave(0, HALF), HALF, 1)


class TestInterpolation:
    a = SpaceMembership.klein_gordon(0, HALF)
    b = SpaceMembership.klein_gordon(1, Fraction(-1, 2))

    def test_convex_combination(self):
        step = interpolate(self.a, self.b, Fraction(1, 4), IV)
        assert step.result.sigma.base.const_value() == Fraction(1, 4)
        assert step.result.b.base.const_value() == Fraction(1, 4)

    def test_theta_range(self):
        with pytest.raises(InterpolationRangeError):
            interpolate(self.a, self.b, Fraction(5, 4), IV)
        with pytest.raises(NotApplicableError):
            interpolate(self.a, SpaceMembership.wave(0, HALF), HALF, IV)

    def test_solve_theta_round_trip(self):
        target = ParamExponent(1 - S, 1)
        th = solve_theta(self.a, self.b, target, IV)
        assert ratfn_equal(th.base, S - HALF)
        out = interpolate(self.a, self.b, th, IV).result
        assert ratfn_equal(out.b.base, 1 - S) and out.b.eps_order == 1

    def test_solve_theta_infeasible(self):
        with pytest.raises(InfeasibleThetaError):
            solve_theta(self.a, self.b, Fraction(3, 4), IV)

    def test_sign_changing_eps_coefficient(self):
        th = Theta(RatFn.lift(HALF), S - Fraction(9, 10))
        with pytest.raises(InterpolationRangeError):
            interpolate(self.a, self.b, th, IV)


def test_membership_validation():
    with pytest.raises(ValueError):
        SpaceMembership.spatial(0, Fraction(3, 2))
    with pytest.raises(ValueError):
        SpaceMembership(SpaceMembership.wave(0, 0).family, 0)
    assert str(SpaceMembership.wave(0, EpsExponent(HALF, 1)))
