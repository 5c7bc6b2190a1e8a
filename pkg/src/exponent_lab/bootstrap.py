"""Pieces shared by the two gauge iterations: the q-shift, the interpolation
step that turns ``1/q_k`` into ``1/r_{k+1}``, trace records and threshold
records."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Union

from .exact import Interval, Poly, RatFn, RootBracket, as_fraction
from .exact.decide import Domain

Value = Union[Fraction, RatFn]

S = RatFn.s()
HALF = Fraction(1, 2)

DEFAULT_K = 60
DEFAULT_STOP_GAP = Fraction(1, 10**15)


class DomainError(ValueError):
    """Regularity parameter outside the admissible range."""


class InconsistencyError(ArithmeticError):
    """Two independent derivations of the same quantity disagree."""


def check_s(s, lo: Fraction = HALF, hi: Fraction = Fraction(1)) -> Fraction:
    """Accept ``s`` in ``(lo, hi]``."""
    s = as_fraction(s)
    if not (lo < s <= hi):
        raise DomainError(f"s = {s} outside ({lo}, {hi}]")
    return s


def _s(s: Optional[Fraction]) -> Value:
    return S if s is None else as_fraction(s)


def q_shift(s: Optional[Fraction] = None) -> Value:
    """The common offset ``1/2 - (1 - s)/3`` with ``1/q = 1/r + offset``."""
    x = _s(s)
    return HALF - (1 - x) / 3


def q_from_r(inv_r: Value, s: Optional[Fraction] = None) -> Value:
    return inv_r + q_shift(s)


def next_r_from_q(inv_q: Value, s: Optional[Fraction] = None) -> Value:
    """``1/r_{k+1} = (5/2 - 3s + (2s - 1)/q_k) / 2``."""
    x = _s(s)
    return (Fraction(5, 2) - 3 * x + (2 * x - 1) * inv_q) / 2


def solve_affine(f: Callable[[RatFn], RatFn]) -> RatFn:
    """Root of ``x -> f(x)`` assuming ``f`` is affine in ``x``."""
    f0 = f(RatFn.lift(0))
    slope = f(RatFn.lift(1)) - f0
    if slope.is_zero():
        raise InconsistencyError("equation does not determine the unknown")
    root = -f0 / slope
    if not f(root).is_zero():
        raise InconsistencyError("equation is not affine in the unknown")
    return root


def next_r_by_interpolation(inv_q: Value) -> RatFn:
    """Solve the two interpolation conditions for ``x = 1/r_{k+1}``.

    ``theta (3/2 - 1/q) = 1/2 - x`` fixes the modulation index and
    ``s - theta (2/q - 1) = 2 - s - 2x`` the Sobolev index; eliminating
    ``theta`` leaves an equation affine in ``x``.
    """
    q = RatFn.lift(inv_q)

    def eq(x: RatFn) -> RatFn:
        return (HALF - x) * (2 * q - 1) - (2 * S - 2 + 2 * x) * (Fraction(3, 2) - q)

    return solve_affine(eq)


@dataclass(frozen=True)
class TraceRow:
    k: int
    inv_r: Fraction
    inv_q: Fraction
    sobolev_index: Fraction
    modulation_index: Fraction
    gap: Fraction
    inv_rtilde: Optional[Fraction] = None
    inv_qtilde: Optional[Fraction] = None


@dataclass(frozen=True)
class BootstrapTrace:
    gauge: str
    s: Fraction
    rows: tuple[TraceRow, ...]
    inv_r_inf: Fraction
    inv_q_inf: Fraction
    contraction: Fraction
    converged: bool
    notes: tuple[str, ...] = ()
    inv_rtilde_inf: Optional[Fraction] = None
    inv_qtilde_inf: Optional[Fraction] = None

    def gap_ratios(self, start: int = 1) -> list[Fraction]:
        """``gap_{k+1} / gap_k`` for consecutive rows with ``k >= start``."""
        rows = [r for r in self.rows if r.k >= start]
        return [b.gap / a.gap for a, b in zip(rows, rows[1:])]


EPS_NOTE = "every inverse exponent carries a trailing +eps; bases are exact"


@dataclass(frozen=True)
class DerivationStep:
    """One multiplier cleared while reducing an inequality to a polynomial."""

    description: str
    multiplier: str
    sign_on_interval: str


@dataclass(frozen=True)
class ThresholdResult:
    gauge: str
    polynomial: Poly
    roots: tuple[RootBracket, ...]
    root: RootBracket
    search_interval: Interval
    tol: Fraction
    closed_form: Optional[str] = None
    closed_form_in_bracket: Optional[bool] = None
    derivation: tuple[DerivationStep, ...] = ()
    direction: dict = field(default_factory=dict)
    flags: tuple[str, ...] = ()

    @property
    def approx(self) -> Fraction:
        return self.root.approx

    @property
    def bracket(self) -> Interval:
        return self.root.bracket


def domain_of(lo, hi, lo_open=False, hi_open=False) -> Domain:
    return Interval(as_fraction(lo), as_fraction(hi), lo_open, hi_open)
