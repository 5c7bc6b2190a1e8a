"""Exact arithmetic substrate: rationals, polynomials and rational functions in
``s``, epsilon-perturbed exponents, certified root isolation and sign checks."""

from .decide import Decision, decide
from .exponent import EpsExponent, ParamExponent, as_param, eps_compare
from .parse import (
    ExpressionError,
    ParsedExponent,
    parse_exponent,
    parse_interval,
    parse_rational,
    parse_value,
)
from .polynomial import S, Poly, as_fraction
from .ratfunc import DegenerateMapError, RatFn, affine_fixed_point, ratfn_equal
from .roots import (
    ClosedInterval,
    Interval,
    RootBracket,
    Sign,
    SignVerdict,
    count_roots,
    isolate_and_refine_root,
    ratfn_sign_on_interval,
    sign_on_interval,
    sturm_sequence,
)

__all__ = [
    "ClosedInterval", "Decision", "DegenerateMapError", "EpsExponent", "ExpressionError",
    "Interval", "ParamExponent", "ParsedExponent", "Poly", "RatFn", "RootBracket", "S",
    "Sign", "SignVerdict", "affine_fixed_point", "as_fraction", "as_param", "count_roots",
    "decide", "eps_compare", "isolate_and_refine_root", "parse_exponent", "parse_interval",
    "parse_rational", "parse_value",
    "ratfn_equal", "ratfn_sign_on_interval", "sign_on_interval", "sturm_sequence",
]
