"""Function-space memberships and the exponent moves between them.

Lebesgue exponents are carried as their inverses (``inv_q = 1/q``), so
``q = infinity`` is simply ``inv_q = 0`` and every move is affine.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .conditions import Condition, ConditionReport, check, domain_label
from .exact import Interval, ParamExponent, RatFn, Sign, as_param, sign_on_interval
from .exact.decide import Domain, as_domain


class SpaceError(ValueError):
    """Base class for inapplicable space operations."""


class NotApplicableError(SpaceError):
    """A hypothesis of the requested estimate fails."""


class InvalidConjugateError(SpaceError):
    """Conjugate exponent requested for ``r' <= 1``."""


class InterpolationRangeError(SpaceError):
    def __init__(self, message: str, witness: Optional[Fraction] = None):
        super().__init__(message)
        self.witness = witness


class InfeasibleThetaError(InterpolationRangeError):
    """No interpolation parameter in ``[0, 1]`` hits the target."""


class Family(enum.Enum):
    WAVE_SOBOLEV = "H^{sigma,b}"
    KLEIN_GORDON = "X^{sigma,b}"
    MIXED_NORM = "L^q_t H^{sigma,r}_x"
    SPATIAL = "H^{sigma,r}_x"

    @property
    def has_modulation(self) -> bool:
        return self in (Family.WAVE_SOBOLEV, Family.KLEIN_GORDON)


@dataclass(frozen=True)
class SpaceMembership:
    """A function lies in the space named by ``family`` with the given indices."""

    family: Family
    sigma: ParamExponent
    b: Optional[ParamExponent] = None
    inv_q: Optional[ParamExponent] = None
    inv_r: Optional[ParamExponent] = None
    homogeneous: bool = False

    def __post_init__(self):
        for name in ("sigma", "b", "inv_q", "inv_r"):
            v = getattr(self, name)
            if v is not None:
                object.__setattr__(self, name, as_param(v))
        if self.family.has_modulation:
            if self.b is None or self.inv_q is not None or self.inv_r is not None:
                raise ValueError(f"{self.family.value} takes sigma and b only")
        elif self.family is Family.MIXED_NORM:
            if self.b is not None or self.inv_q is None or self.inv_r is None:
                raise ValueError("mixed norm takes sigma, q and r")
        else:
            if self.b is not None or self.inv_q is not None or self.inv_r is None:
                raise ValueError("spatial Sobolev takes sigma and r")
        for name in ("inv_q", "inv_r"):
            v = getattr(self, name)
            if v is not None and v.is_const():
                x = v.at(0)
                if x.base < 0 or x.base > 1:
                    raise ValueError(f"{name} = {x} is not the inverse of an exponent >= 1")

    @classmethod
    def wave(cls, sigma, b, homogeneous: bool = False) -> "SpaceMembership":
        return cls(Family.WAVE_SOBOLEV, sigma, b, homogeneous=homogeneous)

    @classmethod
    def klein_gordon(cls, sigma, b) -> "SpaceMembership":
        return cls(Family.KLEIN_GORDON, sigma, b)

    @classmethod
    def mixed(cls, inv_q, sigma, inv_r, homogeneous: bool = False) -> "SpaceMembership":
        return cls(Family.MIXED_NORM, sigma, inv_q=inv_q, inv_r=inv_r, homogeneous=homogeneous)

    @classmethod
    def spatial(cls, sigma, inv_r, homogeneous: bool = False) -> "SpaceMembership":
        return cls(Family.SPATIAL, sigma, inv_r=inv_r, homogeneous=homogeneous)

    def __str__(self) -> str:
        hom = "hom " if self.homogeneous else ""
        if self.family.has_modulation:
            letter = "H" if self.family is Family.WAVE_SOBOLEV else "X"
            return f"{hom}{letter}^{{{self.sigma}, {self.b}}}"
        if self.family is Family.MIXED_NORM:
            return f"{hom}L^(1/({self.inv_q}))_t H^{{{self.sigma}, 1/({self.inv_r})}}_x"
        return f"{hom}H^{{{self.sigma}, 1/({self.inv_r})}}_x"


@dataclass(frozen=True)
class StrichartzPair:
    inv_q: ParamExponent
    inv_r: ParamExponent

    def __post_init__(self):
        object.__setattr__(self, "inv_q", as_param(self.inv_q))
        object.__setattr__(self, "inv_r", as_param(self.inv_r))


ENDPOINT_NOTE = "endpoint (paper convention)"


def strichartz_admissible(pair: StrichartzPair, domain: Domain,
                          paper_endpoint_convention: bool = False) -> ConditionReport:
    """``2 < q <= inf``, ``2 <= r < inf`` and ``1/2 <= 1/q + 1/r <= 1``.

    With ``paper_endpoint_convention`` the condition ``q > 2`` is relaxed to
    ``q >= 2``; the report notes when the relaxation was actually needed.
    """
    domain = as_domain(domain)
    q, r = pair.inv_q, pair.inv_r
    total = q + r
    half = Fraction(1, 2)
    strict_q = check("q>2", "1/q < 1/2", q, half, "<", domain)
    if paper_endpoint_convention and not strict_q.satisfied:
        relaxed = check("q>2", "1/q <= 1/2", q, half, "<=", domain, note=ENDPOINT_NOTE)
        strict_q = relaxed
    conds = [
        check("q<=inf", "1/q >= 0", q, 0, ">=", domain),
        strict_q,
        check("r>=2", "1/r <= 1/2", r, half, "<=", domain),
        check("r<inf", "1/r > 0", r, 0, ">", domain),
        check("sum>=1/2", "1/q + 1/r >= 1/2", total, half, ">=", domain),
        check("sum<=1", "1/q + 1/r <= 1", total, 1, "<=", domain),
    ]
    notes = (ENDPOINT_NOTE,) if any(c.note == ENDPOINT_NOTE for c in conds) else ()
    return ConditionReport("strichartz admissibility", domain_label(domain), tuple(conds), notes)


def conjugate(inv: ParamExponent) -> ParamExponent:
    """Inverse of the Hölder conjugate: ``1/r = 1 - 1/r'``.  Involutive."""
    return 1 - as_param(inv)


def strichartz_forward_shift(m: SpaceMembership, inv_r, domain: Domain,
                             inv_q=Fraction(1, 2),
                             paper_endpoint_convention: bool = True) -> SpaceMembership:
    """``H^{sigma, 1 - (1/q + 1/r)+}`` into ``L^q_t H^{sigma - 1 + 2/r, r}_x``."""
    if not m.family.has_modulation:
        raise NotApplicableError(f"forward shift needs a wave-Sobolev membership, got {m.family.value}")
    inv_r, inv_q = as_param(inv_r), as_param(inv_q)
    domain = as_domain(domain)
    adm = strichartz_admissible(StrichartzPair(inv_q, inv_r), domain, paper_endpoint_convention)
    if not adm.passed:
        bad = ", ".join(c.inequality for c in adm.failed)
        raise NotApplicableError(f"(q, r) not admissible: {bad}")
    need = (1 - (inv_q + inv_r)).with_order((1 - (inv_q + inv_r)).eps_order + 1)
    c = check("b", "b >= 1 - (1/q + 1/r)+", m.b, need, ">=", domain)
    if not c.satisfied:
        raise NotApplicableError(f"modulation index {m.b} below {need}; deficit margin {c.margin}")
    return SpaceMembership.mixed(inv_q, m.sigma - 1 + inv_r.scale(2), inv_r, m.homogeneous)


def strichartz_dual_shift(m: SpaceMembership, domain: Optional[Domain] = None) -> SpaceMembership:
    """``L^{q'}_t H^{sigma, r'}_x`` into ``H^{sigma + 2/r - 1, 1/q + 1/r - 1 -}``."""
    if m.family is not Family.MIXED_NORM:
        raise NotApplicableError(f"dual shift needs a mixed-norm membership, got {m.family.value}")
    inv_rp, inv_qp = m.inv_r, m.inv_q
    if domain is not None:
        c = check("r'>1", "1/r' < 1", inv_rp, 1, "<", domain)
        if not c.satisfied:
            raise InvalidConjugateError(f"1/r' = {inv_rp} is not below 1 (witness s = {c.witness})")
    elif inv_rp.is_const() and inv_rp.at(0) >= 1:
        raise InvalidConjugateError(f"1/r' = {inv_rp} is not below 1")
    inv_r, inv_q = conjugate(inv_rp), conjugate(inv_qp)
    sigma = m.sigma + inv_r.scale(2) - 1
    b = inv_q + inv_r - 1
    b = b.with_order(b.eps_order - 1)
    return SpaceMembership.wave(sigma, b, m.homogeneous)


def sobolev_embed(src: SpaceMembership, inv_p, domain: Domain) -> ConditionReport:
    """``H^{sigma,r}_x`` into ``L^p_x`` in three space dimensions.

    Passes iff ``1/p >= 1/r - sigma/3`` together with the subcritical
    preconditions.  For homogeneous spaces only the scaling-exact case
    ``1/p = 1/r - sigma/3`` is accepted.
    """
    if src.family is not Family.SPATIAL:
        raise NotApplicableError(f"embedding needs a spatial Sobolev membership, got {src.family.value}")
    domain = as_domain(domain)
    inv_p = as_param(inv_p)
    sigma, inv_r = src.sigma, src.inv_r
    rhs = inv_r - sigma.scale(Fraction(1, 3))
    conds = [
        check("sigma>=0", "sigma >= 0", sigma, 0, ">=", domain),
        check("r>1", "1/r < 1", inv_r, 1, "<", domain),
        check("r<=p", "1/p <= 1/r", inv_p, inv_r, "<=", domain),
        check("p<inf", "1/p > 0", inv_p, 0, ">", domain),
    ]
    if src.homogeneous:
        conds.append(check("scaling", "1/p == 1/r - sigma/3", inv_p, rhs, "==", domain))
    else:
        conds.append(check("sobolev", "1/p >= 1/r - sigma/3", inv_p, rhs, ">=", domain))
    return ConditionReport(f"embedding {src} into L^(1/({inv_p}))", domain_label(domain), tuple(conds))


# ---------------------------------------------------------------------------
# Interpolation
# ---------------------------------------------------------------------------


def _sign_level(coeff: RatFn, domain: Domain, what: str) -> Fraction:
    """Collapse an s-dependent eps coefficient to a constant order.

    Constants are kept exactly; otherwise the coefficient must have a strict
    sign on the domain, and the order becomes that sign.
    """
    if coeff.is_const():
        return coeff.const_value()
    domain = as_domain(domain)
    if not isinstance(domain, Interval):
        v = coeff(domain)
        return (v > 0) - (v < 0)
    v = sign_on_interval(coeff.num * coeff.den, domain, strict=True)
    if v.kind is Sign.POSITIVE:
        return Fraction(1)
    if v.kind is Sign.NEGATIVE:
        return Fraction(-1)
    raise InterpolationRangeError(f"eps coefficient of {what} changes sign on {domain}", v.witness)


@dataclass(frozen=True)
class Theta:
    """Interpolation parameter ``base(s) + eps_coeff(s) * eps``.

    The eps coefficient is kept as a function of ``s`` so that a solved
    parameter reproduces its target exactly; it is collapsed to a sign only
    in the final indices.
    """

    base: RatFn
    eps_coeff: RatFn

    def as_param(self, domain: Domain) -> ParamExponent:
        return ParamExponent(self.base, _sign_level(self.eps_coeff, domain, "theta"))

    def __str__(self) -> str:
        return f"{self.base} + ({self.eps_coeff})eps"


def _theta_parts(theta) -> Theta:
    if isinstance(theta, Theta):
        return theta
    t = as_param(theta)
    return Theta(t.base, RatFn.lift(t.eps_order))


def _combine(x: ParamExponent, y: ParamExponent, theta: Theta, domain: Domain, what: str) -> ParamExponent:
    t0 = theta.base
    base = (1 - t0) * x.base + t0 * y.base
    coeff = (1 - t0) * x.eps_order + t0 * y.eps_order + (y.base - x.base) * theta.eps_coeff
    return ParamExponent(base, _sign_level(coeff, domain, what))


@dataclass(frozen=True)
class InterpolationStep:
    endpoint_a: SpaceMembership
    endpoint_b: SpaceMembership
    theta: Theta
    result: SpaceMembership
    checks: tuple[Condition, ...] = ()


def _check_theta(theta: Theta, domain: Domain, exc=InterpolationRangeError) -> tuple[Condition, ...]:
    lo = check("theta>=0", "theta >= 0", theta.base, 0, ">=", domain)
    hi = check("theta<=1", "theta <= 1", theta.base, 1, "<=", domain)
    for c in (lo, hi):
        if not c.satisfied:
            raise exc(f"theta = {theta} violates {c.inequality} on {domain_label(domain)}", c.witness)
    return lo, hi


def interpolate(a: SpaceMembership, b: SpaceMembership, theta, domain: Domain) -> InterpolationStep:
    """Complex interpolation ``[a, b]_theta``; indices combine convexly."""
    if a.family is not b.family:
        raise NotApplicableError(f"cannot interpolate {a.family.value} with {b.family.value}")
    theta = _theta_parts(theta)
    domain = as_domain(domain)
    checks = _check_theta(theta, domain)
    fields = {}
    for name in ("sigma", "b", "inv_q", "inv_r"):
        x, y = getattr(a, name), getattr(b, name)
        if x is not None:
            fields[name] = _combine(x, y, theta, domain, name)
    result = replace(a, **fields)
    return InterpolationStep(a, b, theta, result, checks)


def solve_theta(a: SpaceMembership, b: SpaceMembership, target_modulation, domain: Domain) -> Theta:
    """``theta`` with ``(1 - theta) b_a + theta b_b = target`` on the modulation index."""
    if not (a.family.has_modulation and b.family.has_modulation):
        raise NotApplicableError("solve_theta works on modulation indices")
    target = as_param(target_modulation)
    domain = as_domain(domain)
    xa, xb = a.b, b.b
    gap = xb.base - xa.base
    if gap.is_zero():
        raise NotApplicableError("endpoint modulation indices coincide")
    t0 = (target.base - xa.base) / gap
    coeff = (target.eps_order - xa.eps_order - t0 * (xb.eps_order - xa.eps_order)) / gap
    theta = Theta(t0, coeff)
    _check_theta(theta, domain, InfeasibleThetaError)
    return theta
