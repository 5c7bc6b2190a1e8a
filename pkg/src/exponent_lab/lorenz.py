"""Lorenz-gauge double iteration.

Two interleaved sequences: ``1/q_k`` from ``1/r~_k``, then ``1/r_{k+1}``
from ``1/q_k``, then ``1/q~_k`` from ``1/r_{k+1}``, then ``1/r~_{k+1}`` from
``1/q~_k``.  Composing the four updates gives an affine map on ``1/r_k``
(valid from ``k = 2`` on), whose fixed point and coefficient drive the limits.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
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
    next_r_from_q,
    q_from_r,
    solve_affine,
)
from .conditions import Condition, ConditionReport, check
from .exact import (
    Interval,
    ParamExponent,
    Poly,
    RatFn,
    affine_fixed_point,
    as_fraction,
    isolate_and_refine_root,
    ratfn_equal,
    sign_on_interval,
)
from .spaces import SpaceMembership, Theta, interpolate, solve_theta

SEED_R = (Fraction(7, 2) + S - 4 * S * S) / 6
SEED_RTILDE = (Fraction(3, 2) - S / 3 - S * S) / (1 + S)

PRINTED_ALPHA = (2 * S - 1) * (3 * S - 2) / (2 * (1 + S))
PRINTED_RINF = (
    (Fraction(7, 3) - 3 * S + Fraction(2, 3) * S * S) * (1 + S)
    + (2 * S - 1) * (Fraction(19, 6) - Fraction(25, 6) * S + S * S)
) / (2 * (1 + S) - (3 * S - 2) * (2 * S - 1))
PRINTED_QINF = (Fraction(5, 6) + Fraction(37, 12) * S - Fraction(19, 6) * S * S) / (S * (Fraction(9, 2) - 3 * S))
PRINTED_CUBIC = Poly([5, 106, -152, 32])

WORK_INTERVAL = Interval(Fraction(3, 4), Fraction(1))
PRIMARY_INTERVAL = Interval(Fraction(9, 10), Fraction(1))

B4_NOTE = (
    "the rtilde update is used in the form 1/r~_{k+1} = (7/2 - 4s + (3s-2)/q~_k)/(1+s); "
    "a displayed variant with 2/r~_{k+1} on the left is inconsistent with the composed map and the limit"
)
DIRECTION_FLAG = (
    "printed equivalence reads 'cubic > 0'; exact derivation gives s_inf > 3/4 iff cubic < 0 "
    "on the admissible range"
)
LARGEST_ROOT_FLAG = "the cubic's largest real root lies near 3.89, outside s <= 1; the threshold is its unique root in [3/4, 1]"


def _at(x: Value, s: Optional[Fraction]) -> Value:
    return x if s is None else x(s)


def lorenz_seeds(s) -> tuple[Fraction, Fraction]:
    """``(1/r_1, 1/r~_1)`` at a rational ``s``."""
    s = check_s(s)
    return SEED_R(s), SEED_RTILDE(s)


def rtilde_from_qtilde(inv_qt: Value, s: Optional[Fraction] = None) -> Value:
    """``1/r~_{k+1} = (7/2 - 4s + (3s - 2)/q~_k) / (1 + s)``."""
    x = S if s is None else as_fraction(s)
    return (Fraction(7, 2) - 4 * x + (3 * x - 2) * inv_qt) / (1 + x)


def rtilde_by_interpolation(inv_qt: Value) -> RatFn:
    """Solve the interpolation conditions for ``x = 1/r~_{k+1}``.

    ``theta (3/2 - 1/q~) = 1/2 - x`` and
    ``theta (s + 1 - 2/q~) + (1 - theta)(2s - 1) = 2 - s - 2x``.
    """
    q = RatFn.lift(inv_qt)

    def eq(x: RatFn) -> RatFn:
        return (HALF - x) * (2 - S - 2 * q) - (3 - 3 * S - 2 * x) * (Fraction(3, 2) - q)

    return solve_affine(eq)


@dataclass(frozen=True)
class LorenzState:
    """``(1/r_k, 1/r~_k)`` plus the two intermediate indices of the step that produced them.

    For the seed state ``inv_q`` and ``inv_qtilde`` are ``None``.  After a
    step from ``k``, ``inv_q`` is ``1/q_k`` and ``inv_qtilde`` is ``1/q~_k``.
    """

    k: int
    inv_r: Value
    inv_rtilde: Value
    inv_q: Optional[Value] = None
    inv_qtilde: Optional[Value] = None


def lorenz_step(state: LorenzState, s: Optional[Fraction] = None) -> LorenzState:
    """Apply the four updates in order; symbolic when ``s`` is omitted."""
    q = q_from_r(state.inv_rtilde, s)
    r_next = next_r_from_q(q, s)
    qt = q_from_r(r_next, s)
    rt_next = rtilde_from_qtilde(qt, s)
    return LorenzState(state.k + 1, r_next, rt_next, q, qt)


def composed_map() -> tuple[RatFn, RatFn]:
    """``(alpha, beta)`` with ``1/r_{k+1} = alpha / r_k + beta`` for ``k >= 2``.

    Obtained by pushing ``1/r_k`` through the rtilde update and one full step.
    """

    def push(r: RatFn) -> RatFn:
        rt = rtilde_from_qtilde(q_from_r(r))
        return lorenz_step(LorenzState(0, r, rt)).inv_r

    beta = push(RatFn.lift(0))
    alpha = push(RatFn.lift(1)) - beta
    return alpha, beta


def printed_composed_map(r: Value) -> RatFn:
    """The composed recurrence written out in one line."""
    inner = (Fraction(19, 6) - Fraction(25, 6) * S + S * S + (3 * S - 2) * r) / (1 + S)
    return (Fraction(7, 3) - 3 * S + Fraction(2, 3) * S * S + (2 * S - 1) * inner) / 2


@dataclass(frozen=True)
class LorenzLimits:
    inv_r_inf: Value
    inv_q_inf: Value
    inv_rtilde_inf: Value
    inv_qtilde_inf: Value
    alpha: Value
    beta: Value

    def as_state(self) -> LorenzState:
        return LorenzState(0, self.inv_r_inf, self.inv_rtilde_inf, self.inv_q_inf, self.inv_qtilde_inf)


def _symbolic_limits() -> LorenzLimits:
    alpha, beta = composed_map()
    if not ratfn_equal(alpha, PRINTED_ALPHA):
        raise InconsistencyError("composed-map coefficient disagrees with (2s-1)(3s-2)/(2(1+s))")
    r_inf = affine_fixed_point(alpha, beta)
    qt_inf = q_from_r(r_inf)
    rt_inf = rtilde_from_qtilde(qt_inf)
    q_inf = q_from_r(rt_inf)
    if not ratfn_equal(r_inf, PRINTED_RINF):
        raise InconsistencyError("derived 1/r_inf disagrees with the printed closed form")
    if not ratfn_equal(q_inf, PRINTED_QINF):
        raise InconsistencyError("derived 1/q_inf disagrees with the printed closed form")
    return LorenzLimits(r_inf, q_inf, rt_inf, qt_inf, alpha, beta)


def lorenz_limits(s: Optional[Fraction] = None) -> LorenzLimits:
    lim = _symbolic_limits()
    if s is None:
        return lim
    s = check_s(s)
    return LorenzLimits(*(getattr(lim, f)(s) for f in
                          ("inv_r_inf", "inv_q_inf", "inv_rtilde_inf", "inv_qtilde_inf", "alpha", "beta")))


def contraction_report(interval: Interval = WORK_INTERVAL) -> ConditionReport:
    alpha = PRINTED_ALPHA
    conds = (
        check("alpha>-1", "alpha > -1", alpha, -1, ">", interval),
        check("alpha<1", "alpha < 1", alpha, 1, "<", interval),
    )
    return ConditionReport("contraction of the composed map", str(interval), conds)


def lorenz_trace(s, K: int = DEFAULT_K, stop_gap: Optional[Fraction] = DEFAULT_STOP_GAP) -> BootstrapTrace:
    """Rows ``k = 1..K``: ``1/r_k, 1/q_k, 1/r~_k, 1/q~_k`` and ``|1/r_k - 1/r_inf|``."""
    s = check_s(s, lo=Fraction(3, 4))
    if K < 1:
        raise ValueError("K must be at least 1")
    lim = lorenz_limits(s)
    r1, rt1 = lorenz_seeds(s)
    state = LorenzState(1, r1, rt1)
    rows = []
    converged = False
    for k in range(1, K + 1):
        nxt = lorenz_step(state, s)
        gap = abs(state.inv_r - lim.inv_r_inf)
        rows.append(TraceRow(k, state.inv_r, nxt.inv_q, 2 - s - 2 * state.inv_r, HALF - state.inv_r, gap,
                             state.inv_rtilde, nxt.inv_qtilde))
        if stop_gap is not None and gap < stop_gap:
            converged = True
            break
        state = nxt
    return BootstrapTrace("lorenz", s, tuple(rows), lim.inv_r_inf, lim.inv_q_inf, lim.alpha, converged,
                          (EPS_NOTE, B4_NOTE), lim.inv_rtilde_inf, lim.inv_qtilde_inf)


@dataclass(frozen=True)
class LorenzSInfinity:
    value: RatFn
    by_interpolation: RatFn
    by_formula: RatFn
    theta: Theta


def lorenz_s_infinity() -> LorenzSInfinity:
    """``s_inf`` from interpolating to modulation ``1/2+``, checked against the quotient form."""
    q_inf = _symbolic_limits().inv_q_inf
    low = SpaceMembership.klein_gordon(S, 0)
    high = SpaceMembership.klein_gordon(ParamExponent(S + 1 - 2 * q_inf, -1),
                                        ParamExponent(Fraction(3, 2) - q_inf, -1))
    theta = solve_theta(low, high, ParamExponent(RatFn.lift(HALF), 1), WORK_INTERVAL)
    by_interp = interpolate(low, high, theta, WORK_INTERVAL).result.sigma.base
    by_formula = S - HALF * (2 * q_inf - 1) / (Fraction(3, 2) - q_inf)
    if not ratfn_equal(by_interp, by_formula):
        raise InconsistencyError("s_inf derivations disagree")
    return LorenzSInfinity(by_formula, by_interp, by_formula, theta)


def _root_bound(p: Poly) -> Fraction:
    """Cauchy bound: every real root lies in ``[-M, M]``."""
    lead = abs(p.lead)
    return 1 + max(abs(c) / lead for c in p.coeffs[:-1])


def lorenz_threshold(tol=Fraction(1, 10**10)) -> ThresholdResult:
    """Reduce ``s_inf > 3/4`` to a cubic, isolate its roots and certify the side."""
    tol = as_fraction(tol)
    q_inf = _symbolic_limits().inv_q_inf
    x = q_inf
    steps = []

    def cert(desc: str, mult: RatFn) -> None:
        v = sign_on_interval(mult.num * mult.den, WORK_INTERVAL, strict=True)
        if not v.positive:
            raise InconsistencyError(f"multiplier {mult} is not positive on {WORK_INTERVAL}")
        steps.append(DerivationStep(desc, str(mult), str(v)))

    # s - 3/4 - (1/2)(2x - 1)/(3/2 - x) > 0, times 4(3/2 - x)
    cert("multiply by 4(3/2 - 1/q_inf)", 4 * (Fraction(3, 2) - x))
    lhs = (4 * S - 3) * (Fraction(3, 2) - x) - 2 * (2 * x - 1)
    # (4s - 3)(3/2 - x) - 2(2x - 1) = (6s - 5/2) - (4s + 1) x
    if not ratfn_equal(lhs, (6 * S - Fraction(5, 2)) - (4 * S + 1) * x):
        raise InconsistencyError("linear rearrangement failed")
    cert("divide by 4s + 1", RatFn.lift(4 * S + 1))
    D = S * (Fraction(9, 2) - 3 * S)
    N = x * D
    if not N.is_poly():
        raise InconsistencyError("1/q_inf does not have denominator s(9/2 - 3s)")
    cert("multiply by s(9/2 - 3s)", D)
    P_fn = (6 * S - Fraction(5, 2)) * D - (4 * S + 1) * N
    P = P_fn.num.scale(1 / P_fn.den.lead)
    cubic = P.content_normalized()
    if not cubic.proportional_to(PRINTED_CUBIC):
        raise InconsistencyError(f"derived cubic {cubic} is not proportional to {PRINTED_CUBIC}")
    ratio = P.lead / cubic.lead  # P = ratio * cubic
    satisfied_when = "cubic > 0" if ratio > 0 else "cubic < 0"
    # independent route: numerator of s_inf - 3/4
    diff = lorenz_s_infinity().value - Fraction(3, 4)
    if not diff.num.proportional_to(cubic):
        raise InconsistencyError("numerator of s_inf - 3/4 is not proportional to the cubic")

    M = _root_bound(cubic)
    all_roots = tuple(isolate_and_refine_root(cubic, Interval(-M, M), tol))
    inside = [r for r in all_roots if WORK_INTERVAL.contains(r.approx)]
    if len(inside) != 1:
        raise InconsistencyError(f"expected one root in {WORK_INTERVAL}, found {len(inside)}")
    root = inside[0]
    sinf = lorenz_s_infinity().value
    hi_pt, lo_pt = Fraction(19, 20), Fraction(9, 10)
    above = Interval(root.bracket.hi, Fraction(1), lo_open=True)
    below = Interval(WORK_INTERVAL.lo, root.bracket.lo, hi_open=True)
    above_check = check("sinf>3/4.above", "s_inf > 3/4", sinf, Fraction(3, 4), ">", above)
    below_check = check("sinf<3/4.below", "s_inf < 3/4", sinf, Fraction(3, 4), "<", below)
    direction = {
        "satisfied_when": satisfied_when,
        "satisfied_side": "s > root" if above_check.satisfied and below_check.satisfied else "undetermined",
        "sinf_at_19/20": sinf(hi_pt),
        "sinf_at_19/20>3/4": sinf(hi_pt) > Fraction(3, 4),
        "sinf_at_9/10": sinf(lo_pt),
        "sinf_at_9/10>3/4": sinf(lo_pt) > Fraction(3, 4),
        "above_root": above_check.verdict,
        "below_root": below_check.verdict,
    }
    return ThresholdResult(
        gauge="lorenz",
        polynomial=cubic,
        roots=all_roots,
        root=root,
        search_interval=WORK_INTERVAL,
        tol=tol,
        derivation=tuple(steps),
        direction=direction,
        flags=(DIRECTION_FLAG, LARGEST_ROOT_FLAG, B4_NOTE),
    )


def _open_at_one(interval: Interval) -> Interval:
    return replace(interval, hi_open=True) if interval.hi == 1 else interval


def verify_appendix_52(primary: Interval = PRIMARY_INTERVAL, wide: Interval = WORK_INTERVAL) -> ConditionReport:
    """Monotone convergence and the bounds used by the Lorenz iteration.

    Induction lemmas are checked on ``primary``; the bounds lemma and the
    ``1/q_k < 5/6`` reduction on ``wide``.  The induction base cases are also
    reported on ``wide`` without entering the verdict.
    """
    lim = _symbolic_limits()
    r_inf, rt_inf, q_inf = lim.inv_r_inf, lim.inv_rtilde_inf, lim.inv_q_inf
    alpha = lim.alpha
    r1, rt1 = SEED_R, SEED_RTILDE
    q1 = q_from_r(rt1)
    r2 = next_r_from_q(q1)
    rt2 = rtilde_from_qtilde(q_from_r(r2))
    coupling = (3 * S - 2) / (1 + S)
    reduced_a4 = -3 * S * S + Fraction(7, 2) * S - 1
    reduced_q = Fraction(5, 2) - 2 * S - 2 * S * S
    wide_open = _open_at_one(wide)
    two_thirds = Interval(Fraction(2, 3), Fraction(1))

    def base_cases(iv: Interval, tag: str) -> list[Condition]:
        return [
            check(f"A3.base1{tag}", "1/r_1 > 1/r_inf", r1, r_inf, ">", iv),
            check(f"A3.base2{tag}", "1/r_2 > 1/r_inf", r2, r_inf, ">", iv),
            check(f"A3.base2.reduced{tag}", "3/2 - s/3 - s^2 > 19/6 - 25/6 s + s^2 + (3s-2)/r_inf",
                  Fraction(3, 2) - S / 3 - S * S,
                  Fraction(19, 6) - Fraction(25, 6) * S + S * S + (3 * S - 2) * r_inf, ">", iv),
            check(f"A4.base{tag}", "1/r_2 <= 1/r_1", r2, r1, "<=", iv),
            check(f"A5.rt.base{tag}", "1/r~_1 > 1/r~_inf", rt1, rt_inf, ">", iv),
            check(f"A5.rt.mono{tag}", "1/r~_2 <= 1/r~_1", rt2, rt1, "<=", iv),
        ]

    conds: list[Condition] = base_cases(primary, "")
    conds += [
        check("A3.step.identity", "alpha/r_inf + beta == 1/r_inf", alpha * r_inf + lim.beta, r_inf, "==", primary),
        check("A3.step.alpha>0", "alpha > 0", alpha, 0, ">", primary),
        check("A3.step.alpha<1", "alpha < 1", alpha, 1, "<", primary),
        check("A4.base.identity", "1/r_2 - 1/r_1 == (-3s^2 + 7/2 s - 1)/(6(1+s))",
              r2 - r1, reduced_a4 / (6 * (1 + S)), "==", two_thirds),
        check("A4.base.reduced", "-3s^2 + 7/2 s - 1 <= 0", reduced_a4, 0, "<=", two_thirds),
        check("A5.rt.coupling", "(3s-2)/(1+s) > 0", coupling, 0, ">", wide),
        check("A5.r1<1/2", "1/r_1 < 1/2", r1, HALF, "<", wide),
        check("A5.rt1<1/2", "1/r~_1 < 1/2", rt1, HALF, "<", wide),
        check("A5.qinf>=1/2", "1/q_inf >= 1/2", q_inf, HALF, ">=", wide),
        check("A5.qinf>1/2", "1/q_inf > 1/2", q_inf, HALF, ">", wide_open,
              note="equality at s = 1"),
        check("A5.rinf>=1-s", "1/r_inf >= 1 - s", r_inf, 1 - S, ">=", wide),
        check("A5.rinf>1-s", "1/r_inf > 1 - s", r_inf, 1 - S, ">", wide_open,
              note="equality at s = 1; every finite k still satisfies the strict bound there"),
        check("A5.rtinf>=3(1-s)/2", "1/r~_inf >= 3(1-s)/2", rt_inf, Fraction(3, 2) * (1 - S), ">=", wide),
        check("A5.rtinf>3(1-s)/2", "1/r~_inf > 3(1-s)/2", rt_inf, Fraction(3, 2) * (1 - S), ">", wide_open,
              note="equality at s = 1; every finite k still satisfies the strict bound there"),
        check("A5.rtinf.reduced", "(s - 5/6)^2 - 1/36 <= 0", (S - Fraction(5, 6)) ** 2 - Fraction(1, 36), 0,
              "<=", two_thirds),
        check("Q.q1<5/6", "1/q_1 < 5/6", q1, Fraction(5, 6), "<", wide),
        check("Q.reduced", "5/2 - 2s - 2s^2 < 0", reduced_q, 0, "<", wide),
        check("Q.identity", "5/6 - 1/q_1 == -(5/2 - 2s - 2s^2)/(3(1+s))",
              Fraction(5, 6) - q1, -reduced_q / (3 * (1 + S)), "==", wide),
        check("Q.equivalence", "1/2 - 1/r~_1 + 1/r_2 - (2/3 - s/3) == (3/2 - s)(5/6 - 1/q_1)",
              HALF - rt1 + r2 - (Fraction(2, 3) - S / 3), (Fraction(3, 2) - S) * (Fraction(5, 6) - q1), "==", wide),
    ]
    info = base_cases(wide, "[wide]") + [
        check("A3.base2.factor[wide]", "4s^2 + 4s - 5 > 0", 4 * S * S + 4 * S - 5, 0, ">", wide),
    ]
    notes = (
        "induction base cases are checked on the closed interval [9/10, 1], which contains the stated open range",
        B4_NOTE,
    )
    return ConditionReport("monotone convergence and bounds (Lorenz)", f"{primary} / {wide}", tuple(conds),
                           notes, tuple(info))


def lorenz_monotone_probe(grid: list[Fraction], K: int = 30) -> list[tuple[Fraction, bool]]:
    """Exact check that ``1/r_k`` and ``1/r~_k`` decrease for ``k < K`` at each grid point."""
    out = []
    for s in grid:
        tr = lorenz_trace(s, K, None)
        r_ok = all(b.inv_r <= a.inv_r for a, b in zip(tr.rows, tr.rows[1:]))
        rt_ok = all(b.inv_rtilde <= a.inv_rtilde for a, b in zip(tr.rows, tr.rows[1:]))
        out.append((s, r_ok and rt_ok))
    return out
