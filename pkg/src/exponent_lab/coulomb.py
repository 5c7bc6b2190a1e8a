"""Coulomb-gauge regularity iteration.

The inverse exponents ``t_k = 1/r_k`` follow an affine map ``t -> a t + b``
with ``a = s - 1/2``.  Everything symbolic is a :class:`RatFn` in ``s``;
traces at a rational ``s`` are exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .bootstrap import (
    DEFAULT_K,
    DEFAULT_STOP_GAP,
    EPS_NOTE,
    HALF,
    S,
    BootstrapTrace,
    DerivationStep,
    InconsistencyError,
    ThresholdResult,
    TraceRow,
    Value,
    check_s,
    next_r_by_interpolation,
    q_from_r,
    solve_affine,
)
from .conditions import Condition, ConditionReport, check
from .exact import (
    Interval,
    ParamExponent,
    RatFn,
    affine_fixed_point,
    as_fraction,
    isolate_and_refine_root,
    ratfn_equal,
    sign_on_interval,
)
from .spaces import SpaceMembership, Theta, interpolate, solve_theta

# t -> A t + B
A = S - HALF
B = (1 - S) * (7 - 2 * S) / 6

PRINTED_RINF = (Fraction(7, 3) - Fraction(2, 3) * S) * (1 - S) / (3 - 2 * S)
CLOSED_FORM_SINF = S - 6 * (1 - S) / (3 * (3 - 2 * S) - 4 * (1 - S))

WORK_INTERVAL = Interval(Fraction(3, 4), Fraction(1))
ROOT_DISCREPANCY = (
    "two printed decimals exist for this threshold: 0.91254 disagrees with the "
    "exact root 0.9135242...; 0.91352 agrees"
)


def seed_fn() -> RatFn:
    """``1/r_1 = 3/4 - s/3 - s^2/3`` as a function of ``s``."""
    return Fraction(3, 4) - S / 3 - S * S / 3


def seed_by_interpolation() -> RatFn:
    """Re-derive the seed from its interpolation conditions.

    ``theta (1/2 + s/3) = 1/2 - x`` and ``s - theta (1 - 2s/3) = 2 - s - 2x``.
    """

    def eq(x: RatFn) -> RatFn:
        return (HALF - x) * (1 - 2 * S / 3) - (2 * S - 2 + 2 * x) * (HALF + S / 3)

    return solve_affine(eq)


def coulomb_seed(s) -> Fraction:
    s = check_s(s)
    return seed_fn()(s)


def coulomb_step(t: Value, s: Optional[Fraction] = None) -> Value:
    """One iteration ``t_{k+1} = a t_k + b``; symbolic when ``s`` is omitted."""
    if s is None:
        return A * RatFn.lift(t) + B
    s = as_fraction(s)
    return A(s) * as_fraction(t) + B(s)


def coulomb_step_implicit(t: Value) -> RatFn:
    """The same step obtained by solving the interpolation conditions with ``1/q = t + shift``."""
    return next_r_by_interpolation(q_from_r(RatFn.lift(t)))


@dataclass(frozen=True)
class CoulombLimit:
    inv_r_inf: Value
    inv_q_inf: Value


def coulomb_limit(s: Optional[Fraction] = None) -> CoulombLimit:
    """Fixed point of the step and the matching ``1/q_inf``; symbolic by default."""
    t_inf = affine_fixed_point(A, B)
    q_inf = q_from_r(t_inf)
    if s is None:
        return CoulombLimit(t_inf, q_inf)
    s = check_s(s)
    return CoulombLimit(t_inf(s), q_inf(s))


@dataclass(frozen=True)
class SInfinity:
    value: RatFn
    by_interpolation: RatFn
    by_formula: RatFn
    closed_form: RatFn
    theta: Theta


def coulomb_s_infinity() -> SInfinity:
    """``s_inf`` three ways, certified equal.

    (i) interpolating ``H^{s,0}`` with ``H^{s+1-2/q_inf -, 3/2-1/q_inf -}`` to
    modulation ``3/4+``; (ii) the explicit quotient
    ``s - (3/4)(2/q_inf - 1)/(3/2 - 1/q_inf)``; (iii) the closed form.
    """
    q_inf = coulomb_limit().inv_q_inf
    low = SpaceMembership.wave(S, 0)
    high = SpaceMembership.wave(ParamExponent(S + 1 - 2 * q_inf, -1), ParamExponent(Fraction(3, 2) - q_inf, -1))
    theta = solve_theta(low, high, ParamExponent(RatFn.lift(Fraction(3, 4)), 1), WORK_INTERVAL)
    step = interpolate(low, high, theta, WORK_INTERVAL)
    by_interp = step.result.sigma.base
    by_formula = S - Fraction(3, 4) * (2 * q_inf - 1) / (Fraction(3, 2) - q_inf)
    if not (ratfn_equal(by_interp, by_formula) and ratfn_equal(by_formula, CLOSED_FORM_SINF)):
        raise InconsistencyError("s_inf derivations disagree")
    return SInfinity(by_formula, by_interp, by_formula, CLOSED_FORM_SINF, theta)


def coulomb_trace(s, K: int = DEFAULT_K, stop_gap: Optional[Fraction] = DEFAULT_STOP_GAP) -> BootstrapTrace:
    """Exact rows ``k = 1..K``; stops early once the gap drops below ``stop_gap``."""
    s = check_s(s, lo=Fraction(3, 4))
    if K < 1:
        raise ValueError("K must be at least 1")
    lim = coulomb_limit(s)
    t = coulomb_seed(s)
    rows = []
    converged = False
    for k in range(1, K + 1):
        gap = abs(t - lim.inv_r_inf)
        rows.append(TraceRow(k, t, q_from_r(t, s), 2 - s - 2 * t, HALF - t, gap))
        if stop_gap is not None and gap < stop_gap:
            converged = True
            break
        t = coulomb_step(t, s)
    return BootstrapTrace("coulomb", s, tuple(rows), lim.inv_r_inf, lim.inv_q_inf, A(s), converged, (EPS_NOTE,))


def coulomb_threshold(tol=Fraction(1, 10**12)) -> ThresholdResult:
    """Solve ``s_inf(s) = 3/4`` on ``(3/4, 1)`` by exact denominator clearing."""
    tol = as_fraction(tol)
    diff = coulomb_s_infinity().value - Fraction(3, 4)
    den_sign = sign_on_interval(diff.den, WORK_INTERVAL, strict=True)
    if not (den_sign.positive or den_sign.negative):
        raise InconsistencyError("denominator of s_inf - 3/4 vanishes on [3/4, 1]")
    poly = diff.num.content_normalized()
    roots = tuple(isolate_and_refine_root(poly, WORK_INTERVAL, tol))
    if len(roots) != 1:
        raise InconsistencyError(f"expected one root in {WORK_INTERVAL}, found {len(roots)}")
    root = roots[0]
    # closed form (25 - sqrt(313))/8 inside [lo, hi]  <=>  25 - 8 hi <= sqrt(313) <= 25 - 8 lo
    lo, hi = root.bracket.lo, root.bracket.hi
    a, b = 25 - 8 * hi, 25 - 8 * lo
    in_bracket = a >= 0 and a * a <= 313 <= b * b
    above = Interval(min(root.bracket.hi + Fraction(1, 10**4), Fraction(1)), Fraction(1))
    sinf = coulomb_s_infinity().value
    check_above = check("sinf>3/4", "s_inf - 3/4 > 0", sinf, Fraction(3, 4), ">", above)
    direction = {
        "satisfied_side": "s > root",
        "check_interval": str(above),
        "verdict": check_above.verdict,
        "holds": check_above.satisfied,
    }
    derivation = (
        DerivationStep("clear the denominator of s_inf - 3/4", str(diff.den),
                       "Positive" if den_sign.positive else "Negative"),
    )
    return ThresholdResult(
        gauge="coulomb",
        polynomial=poly,
        roots=roots,
        root=root,
        search_interval=WORK_INTERVAL,
        tol=tol,
        closed_form="(25 - sqrt(313))/8",
        closed_form_in_bracket=in_bracket,
        derivation=derivation,
        direction=direction,
        flags=(ROOT_DISCREPANCY,),
    )


def verify_appendix_51(interval: Interval = WORK_INTERVAL) -> ConditionReport:
    """Monotone convergence of ``t_k`` by exact sign checks on ``interval``."""
    lim = coulomb_limit()
    t_inf, t1 = lim.inv_r_inf, seed_fn()
    reduction = S * (Fraction(2, 3) * S * S - S + HALF) - Fraction(1, 12)
    open_hi = Interval(interval.lo, interval.hi, interval.lo_open, True) if interval.hi == 1 else interval
    conds: list[Condition] = [
        check("A1.base", "t_1 > t_inf", t1, t_inf, ">", interval),
        check("A1.base.reduced", "s(2/3 s^2 - s + 1/2) - 1/12 > 0", reduction, 0, ">", interval),
        check("A1.base.identity", "(3 - 2s)(t_1 - t_inf) == s(2/3 s^2 - s + 1/2) - 1/12",
              (3 - 2 * S) * (t1 - t_inf), reduction, "==", interval),
        check("A1.quadratic", "(s - 3/4)^2 + 1/48 > 0", (S - Fraction(3, 4)) ** 2 + Fraction(1, 48), 0, ">", interval),
        check("A1.step.identity", "step(t_inf) == t_inf", coulomb_step(t_inf), t_inf, "==", interval),
        check("A1.step.a>0", "a(s) = s - 1/2 > 0", A, 0, ">", interval),
        check("A1.step.a<=1/2", "a(s) = s - 1/2 <= 1/2", A, HALF, "<=", interval),
        check("A2.reduction", "1 - a(s) > 0", 1 - A, 0, ">", interval),
        check("R51.seed<=1/2", "t_1 <= 1/2", t1, HALF, "<=", interval),
        check("R51.seed<=1/2.reduced", "s^2 + s - 3/4 >= 0", S * S + S - Fraction(3, 4), 0, ">=", interval),
        check("R51.tinf>=(1-s)/3", "t_inf >= (1 - s)/3", t_inf, (1 - S) / 3, ">=", interval),
        check("R51.tinf>=1-s", "t_inf >= 1 - s", t_inf, 1 - S, ">=", interval),
        check("R51.tinf>1-s", "t_inf > 1 - s", t_inf, 1 - S, ">", open_hi,
              note="equality at s = 1, so the strict bound is checked with s = 1 excluded"),
    ]
    return ConditionReport("monotone convergence (Coulomb)", str(interval), tuple(conds),
                           (f"contraction factor a(1) = {A(1)}",))
