"""Load the fixture catalog and run each fixture through its checker."""

from __future__ import annotations

import fnmatch
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable, Optional, Union

from ..conditions import Condition, ConditionReport, check, domain_label
from ..exact import (
    EpsExponent,
    ExpressionError,
    Interval,
    ParamExponent,
    isolate_and_refine_root,
    parse_exponent,
    parse_interval,
    parse_value,
)
from ..product_laws import SLOTS, AfsSextuple, FreeSlot, ProductVariant, afs_check, afs_feasible, sobolev_product_check
from ..spaces import (
    SpaceError,
    SpaceMembership,
    StrichartzPair,
    conjugate,
    sobolev_embed,
    strichartz_admissible,
    strichartz_dual_shift,
)

SCHEMA_VERSION = 1
CHECKERS = ("afs", "product", "dual_shift", "embedding", "relations")
OUTCOMES = ("pass", "fail")


class FixtureDefinitionError(ValueError):
    """A catalog record is malformed."""


@dataclass(frozen=True)
class Fixture:
    id: str
    locator: str
    anchor: str
    checker: str
    payload: dict = field(hash=False, compare=False)
    domain: Interval = Interval(Fraction(3, 4), Fraction(1))
    expected: str = "pass"
    fail_region: Optional[Interval] = None
    domain_root: Optional[str] = None
    note: str = ""

    @property
    def paper_reference(self) -> str:
        return f"{self.locator}: {self.anchor}"


def _expr(text, where: str) -> None:
    if not isinstance(text, str):
        raise FixtureDefinitionError(f"{where}: expected an expression string, got {text!r}")
    try:
        parse_exponent(text)
    except (ExpressionError, ZeroDivisionError) as exc:
        raise FixtureDefinitionError(f"{where}: {exc}") from None


def _polynomial(text, where: str) -> None:
    if not isinstance(text, str):
        raise FixtureDefinitionError(f"{where}: expected a polynomial in s, got {text!r}")
    try:
        v = parse_value(text)
    except (ExpressionError, ZeroDivisionError) as exc:
        raise FixtureDefinitionError(f"{where}: {exc}") from None
    if v.eps_order != 0 or not v.base.is_poly() or v.base.num.degree < 1:
        raise FixtureDefinitionError(f"{where}: expected a nonconstant polynomial in s without eps")


def _need(d: dict, keys: Iterable[str], where: str) -> None:
    if not isinstance(d, dict):
        raise FixtureDefinitionError(f"{where}: expected an object")
    missing = [k for k in keys if k not in d]
    if missing:
        raise FixtureDefinitionError(f"{where}: missing {', '.join(missing)}")


def _validate_relations(items, where: str) -> None:
    if not isinstance(items, list):
        raise FixtureDefinitionError(f"{where}: relations must be a list")
    for i, r in enumerate(items):
        _need(r, ("id", "lhs", "rel", "rhs"), f"{where}[{i}]")
        if r["rel"] not in (">", ">=", "<", "<=", "=="):
            raise FixtureDefinitionError(f"{where}[{i}]: unknown relation {r['rel']!r}")
        _expr(r["lhs"], f"{where}[{i}].lhs")
        _expr(r["rhs"], f"{where}[{i}].rhs")


def _validate_payload(checker: str, p: dict, where: str) -> None:
    if not isinstance(p, dict):
        raise FixtureDefinitionError(f"{where}: payload must be an object")
    if checker == "afs":
        _need(p, ("mode", "sextuple"), where)
        if p["mode"] not in ("fixed", "feasible"):
            raise FixtureDefinitionError(f"{where}: afs mode must be 'fixed' or 'feasible'")
        _need(p["sextuple"], SLOTS, f"{where}.sextuple")
        for k in SLOTS:
            _expr(p["sextuple"][k], f"{where}.sextuple.{k}")
    elif checker == "product":
        _need(p, ("variant", "s0", "s1", "s2"), where)
        try:
            ProductVariant(p["variant"])
        except ValueError:
            raise FixtureDefinitionError(f"{where}: unknown product variant {p['variant']!r}") from None
        for k in ("s0", "s1", "s2"):
            _expr(p[k], f"{where}.{k}")
    elif checker == "dual_shift":
        _need(p, ("source", "expect"), where)
        _need(p["source"], ("inv_q", "sigma", "inv_r"), f"{where}.source")
        _need(p["expect"], ("sigma", "b"), f"{where}.expect")
        for part in ("source", "expect", "dominates"):
            for k, v in p.get(part, {}).items():
                _expr(v, f"{where}.{part}.{k}")
    elif checker == "embedding":
        _need(p, ("embeddings",), where)
        for i, e in enumerate(p["embeddings"]):
            _need(e, ("id", "sigma", "inv_r", "inv_p"), f"{where}.embeddings[{i}]")
            for k in ("sigma", "inv_r", "inv_p"):
                _expr(e[k], f"{where}.embeddings[{i}].{k}")
    elif checker == "relations":
        _need(p, ("relations",), where)
    else:
        raise FixtureDefinitionError(f"{where}: unknown checker {checker!r}")
    if "relations" in p:
        _validate_relations(p["relations"], f"{where}.relations")


def fixture_from_record(rec: dict) -> Fixture:
    _need(rec, ("id", "locator", "anchor", "checker", "payload", "domain", "expected"), "fixture")
    fid = rec["id"]
    if not isinstance(fid, str) or not fid:
        raise FixtureDefinitionError("fixture id must be a nonempty string")
    if not (isinstance(rec["anchor"], str) and rec["anchor"].strip()):
        raise FixtureDefinitionError(f"{fid}: anchor must be nonempty")
    if rec["checker"] not in CHECKERS:
        raise FixtureDefinitionError(f"{fid}: unknown checker {rec['checker']!r}")
    if rec["expected"] not in OUTCOMES:
        raise FixtureDefinitionError(f"{fid}: expected must be 'pass' or 'fail'")
    _validate_payload(rec["checker"], rec["payload"], fid)
    try:
        domain = parse_interval(rec["domain"])
        region = parse_interval(rec["fail_region"]) if rec.get("fail_region") else None
    except ExpressionError as exc:
        raise FixtureDefinitionError(f"{fid}: {exc}") from None
    if rec["expected"] == "fail" and region is None:
        raise FixtureDefinitionError(f"{fid}: an expected failure needs a fail_region")
    if rec.get("domain_root"):
        _polynomial(rec["domain_root"], f"{fid}.domain_root")
    return Fixture(fid, rec["locator"], rec["anchor"], rec["checker"], rec["payload"], domain,
                   rec["expected"], region, rec.get("domain_root"), rec.get("note", ""))


def load_catalog(path: Optional[str] = None) -> tuple[Fixture, ...]:
    """Read the catalog (the packaged one by default), sorted by id."""
    if path is None:
        text = resources.files(__package__).joinpath("catalog.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise FixtureDefinitionError(f"unsupported schema_version {doc.get('schema_version')!r}")
    fixtures = [fixture_from_record(r) for r in doc.get("fixtures", [])]
    ids = [f.id for f in fixtures]
    if len(set(ids)) != len(ids):
        raise FixtureDefinitionError("duplicate fixture ids")
    return tuple(sorted(fixtures, key=lambda f: f.id))


def effective_domain(f: Fixture) -> Interval:
    """The declared domain, with the lower end raised to a certified root when ``domain_root`` is set."""
    if not f.domain_root:
        return f.domain
    poly = parse_value(f.domain_root).base.num
    roots = isolate_and_refine_root(poly, f.domain, tol=Fraction(1, 10**12))
    if len(roots) != 1:
        raise FixtureDefinitionError(f"{f.id}: domain_root must have one root in {f.domain}, found {len(roots)}")
    return Interval(roots[0].bracket.hi, f.domain.hi, False, f.domain.hi_open)


# ---------------------------------------------------------------------------
# Checkers
# ---------------------------------------------------------------------------

Domain = Union[Fraction, Interval]


def _prefixed(prefix: str, conds: Iterable[Condition]) -> list[Condition]:
    return [Condition(f"{prefix}.{c.id}", c.inequality, c.relation, c.satisfied, c.margin, c.verdict,
                      c.witness, c.note) for c in conds]


def _relations(items, domain: Domain) -> list[Condition]:
    return [check(f"rel.{r['id']}", f"{r['lhs']} {r['rel']} {r['rhs']}", parse_value(r["lhs"]),
                  parse_value(r["rhs"]), r["rel"], domain) for r in items]


def _run_afs(p: dict, domain: Domain) -> tuple[list[Condition], list[str]]:
    parsed = {k: parse_exponent(p["sextuple"][k]) for k in SLOTS}
    x = AfsSextuple(*(parsed[k].value for k in SLOTS))
    if p["mode"] == "fixed":
        return list(afs_check(x, domain).conditions), []
    free = [FreeSlot(k, parsed[k].free_sign) for k in SLOTS if parsed[k].free_sign is not None]
    res = afs_feasible(x, free, domain)
    if res.feasible:
        orders = ", ".join(f"{k}: {v:+d}" for k, v in res.assignment.items()) or "none free"
        notes = [f"eps orders chosen for free slots: {orders}"]
    else:
        notes = ["no eps orders make every condition hold; blocking: " + ", ".join(res.blocking)]
    return list(res.report.conditions), notes


def _run_product(p: dict, domain: Domain) -> tuple[list[Condition], list[str]]:
    rep = sobolev_product_check(parse_value(p["s0"]), parse_value(p["s1"]), parse_value(p["s2"]),
                                ProductVariant(p["variant"]), domain)
    return list(rep.conditions), []


def _match(cid: str, got: ParamExponent, text: str, domain: Domain) -> list[Condition]:
    """Base equality, plus the eps order: exact, or only its sign for a trailing ``+``/``-``."""
    want = parse_exponent(text)
    base = check(f"{cid}.base", f"{cid} base == {want.value.base}", got.base, want.value.base, "==", domain)
    if want.free_sign is None:
        ok = got.eps_order == want.value.eps_order
        text_o = f"{cid} eps order == {want.value.eps_order}"
    else:
        ok = got.eps_order * want.free_sign > 0
        text_o = f"{cid} eps order {'>' if want.free_sign > 0 else '<'} 0"
    order = Condition(f"{cid}.order", text_o, "==", ok, EpsExponent(0, got.eps_order - want.value.eps_order),
                      None, None, "")
    return [base, order]


def _run_dual_shift(p: dict, domain: Domain) -> tuple[list[Condition], list[str]]:
    src = p["source"]
    inv_qp, sigma, inv_rp = (parse_value(src[k]) for k in ("inv_q", "sigma", "inv_r"))
    conds = _prefixed("pair", strichartz_admissible(StrichartzPair(conjugate(inv_qp), conjugate(inv_rp)),
                                                    domain, paper_endpoint_convention=True).conditions)
    try:
        out = strichartz_dual_shift(SpaceMembership.mixed(inv_qp, sigma, inv_rp), domain)
    except SpaceError as exc:
        conds.append(Condition("shift", "dual Strichartz shift applies", "==", False, EpsExponent(0), None,
                               None, str(exc)))
        return conds, []
    conds += _match("sigma", out.sigma, p["expect"]["sigma"], domain)
    conds += _match("b", out.b, p["expect"]["b"], domain)
    notes = [f"result H^{{{out.sigma}, {out.b}}}"]
    dom = p.get("dominates")
    if dom:
        conds.append(check("dominates.sigma", f"{dom['sigma']} <= result sigma", parse_value(dom["sigma"]),
                           out.sigma, "<=", domain))
        conds.append(check("dominates.b", f"{dom['b']} <= result b", parse_value(dom["b"]), out.b, "<=", domain))
    return conds, notes


def _run_embedding(p: dict, domain: Domain) -> tuple[list[Condition], list[str]]:
    conds: list[Condition] = []
    for e in p["embeddings"]:
        src = SpaceMembership.spatial(parse_value(e["sigma"]), parse_value(e["inv_r"]), bool(e.get("homogeneous")))
        conds += _prefixed(e["id"], sobolev_embed(src, parse_value(e["inv_p"]), domain).conditions)
    return conds, []


_RUNNERS = {
    "afs": _run_afs,
    "product": _run_product,
    "dual_shift": _run_dual_shift,
    "embedding": _run_embedding,
    "relations": lambda p, d: ([], []),
}


def run_fixture(f: Fixture, s: Optional[Fraction] = None) -> ConditionReport:
    """Run ``f`` on its own domain, or at the rational point ``s``."""
    domain: Domain = effective_domain(f) if s is None else Fraction(s)
    conds, notes = _RUNNERS[f.checker](f.payload, domain)
    conds = list(conds) + _relations(f.payload.get("relations", []), domain)
    if f.note:
        notes = [f.note] + notes
    return ConditionReport(f"fixture {f.id}", domain_label(domain), tuple(conds), tuple(notes))


# ---------------------------------------------------------------------------
# Suite
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FixtureOutcome:
    fixture: Fixture
    report: Optional[ConditionReport]
    outcome: str  # "pass", "fail" or "skipped"
    expected: str

    @property
    def matches(self) -> bool:
        return self.outcome == "skipped" or self.outcome == self.expected


@dataclass(frozen=True)
class SuiteSummary:
    s: Optional[Fraction]
    outcomes: tuple[FixtureOutcome, ...]

    def count(self, outcome: str) -> int:
        return sum(1 for o in self.outcomes if o.outcome == outcome)

    @property
    def unexpected(self) -> list[FixtureOutcome]:
        return [o for o in self.outcomes if not o.matches]

    @property
    def ok(self) -> bool:
        return not self.unexpected


def expected_at(f: Fixture, s: Fraction) -> Optional[str]:
    """Expected outcome at a point, or ``None`` when ``s`` lies outside the fixture's domain."""
    if not effective_domain(f).contains(s):
        return None
    if f.expected == "pass":
        return "pass"
    return "fail" if f.fail_region.contains(s) else "pass"


def evaluate(f: Fixture, s: Optional[Fraction] = None) -> FixtureOutcome:
    if s is None:
        rep = run_fixture(f)
        return FixtureOutcome(f, rep, "pass" if rep.passed else "fail", f.expected)
    exp = expected_at(f, s)
    if exp is None:
        return FixtureOutcome(f, None, "skipped", "skipped")
    rep = run_fixture(f, s)
    return FixtureOutcome(f, rep, "pass" if rep.passed else "fail", exp)


def select(fixtures: Iterable[Fixture], patterns: Optional[Iterable[str]]) -> list[Fixture]:
    """Fixtures whose id matches any glob in ``patterns``; all of them when ``patterns`` is ``None``."""
    fixtures = list(fixtures)
    if patterns is None:
        return fixtures
    pats = list(patterns)
    return [f for f in fixtures if any(fnmatch.fnmatchcase(f.id, p) for p in pats)]


def run_suite(s_point=None, patterns: Optional[Iterable[str]] = None,
              fixtures: Optional[Iterable[Fixture]] = None) -> SuiteSummary:
    """Run the catalog (or ``fixtures``) symbolically, or at ``s_point`` when given."""
    chosen = select(load_catalog() if fixtures is None else fixtures, patterns)
    s = None if s_point is None else Fraction(s_point)
    outcomes = tuple(evaluate(f, s) for f in sorted(chosen, key=lambda f: f.id))
    return SuiteSummary(s, outcomes)
