"""Report documents: exact rationals as ``p/q`` strings next to correctly
rounded decimals, emitted as JSON, CSV or fixed-width text."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from decimal import Context, Decimal, ROUND_HALF_EVEN
from fractions import Fraction
from typing import Any, Optional

from . import __version__
from .bootstrap import BootstrapTrace, ThresholdResult
from .conditions import Condition, ConditionReport
from .exact import EpsExponent, Interval, ParamExponent, Poly, RatFn, RootBracket
from .fixtures import SuiteSummary

SCHEMA_VERSION = 1
DEFAULT_PRECISION = 12
FORMATS = ("json", "csv", "text")


def decimal_string(x: Fraction, precision: int = DEFAULT_PRECISION) -> str:
    """``x`` correctly rounded (half-even) to ``precision`` significant digits."""
    x = Fraction(x)
    ctx = Context(prec=precision, rounding=ROUND_HALF_EVEN)
    return str(ctx.divide(Decimal(x.numerator), Decimal(x.denominator)))


def rational(x: Fraction, precision: int = DEFAULT_PRECISION) -> dict:
    x = Fraction(x)
    return {"exact": str(x), "decimal": decimal_string(x, precision)}


def exponent_fields(m, precision: int = DEFAULT_PRECISION) -> dict:
    """``margin_num``/``margin_den``/``eps_order`` for a constant or s-dependent margin."""
    if isinstance(m, EpsExponent):
        return {"margin_num": str(m.base.numerator), "margin_den": str(m.base.denominator),
                "margin_decimal": decimal_string(m.base, precision), "eps_order": str(m.eps_order)}
    m = ParamExponent.lift(m)
    if m.base.is_const():
        return exponent_fields(EpsExponent(m.base.const_value(), m.eps_order), precision)
    return {"margin_num": str(m.base.num), "margin_den": str(m.base.den), "margin_decimal": None,
            "eps_order": str(m.eps_order)}


def jsonable(x: Any, precision: int = DEFAULT_PRECISION) -> Any:
    """Convert results to JSON-ready values; rationals become exact/decimal pairs."""
    if x is None or isinstance(x, (bool, str, int)):
        return x
    if isinstance(x, Fraction):
        return rational(x, precision)
    if isinstance(x, (Poly, RatFn, ParamExponent, EpsExponent)):
        return str(x)
    if isinstance(x, Interval):
        return {"interval": str(x), "lo": rational(x.lo, precision), "hi": rational(x.hi, precision)}
    if isinstance(x, dict):
        return {str(k): jsonable(v, precision) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v, precision) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def condition_dict(c: Condition, precision: int = DEFAULT_PRECISION) -> dict:
    d = {"id": c.id, "inequality": c.inequality, "relation": c.relation, "satisfied": c.satisfied,
         "verdict": c.verdict, "witness": None if c.witness is None else rational(c.witness, precision),
         "note": c.note}
    d.update(exponent_fields(c.margin, precision))
    return d


def report_dict(r: ConditionReport, precision: int = DEFAULT_PRECISION) -> dict:
    return {
        "title": r.title,
        "domain": r.domain,
        "passed": r.passed,
        "conditions": [condition_dict(c, precision) for c in r.conditions],
        "informational": [condition_dict(c, precision) for c in r.informational],
        "notes": list(r.notes),
    }


def trace_dict(t: BootstrapTrace, precision: int = DEFAULT_PRECISION) -> dict:
    rows = []
    for r in t.rows:
        row = {"k": r.k, "inv_r": rational(r.inv_r, precision), "inv_q": rational(r.inv_q, precision)}
        if r.inv_rtilde is not None:
            row["inv_rtilde"] = rational(r.inv_rtilde, precision)
            row["inv_qtilde"] = rational(r.inv_qtilde, precision)
        row.update({"sobolev_index": rational(r.sobolev_index, precision),
                    "modulation_index": rational(r.modulation_index, precision),
                    "gap": rational(r.gap, precision)})
        rows.append(row)
    limits = {"inv_r_inf": t.inv_r_inf, "inv_q_inf": t.inv_q_inf}
    if t.inv_rtilde_inf is not None:
        limits.update(inv_rtilde_inf=t.inv_rtilde_inf, inv_qtilde_inf=t.inv_qtilde_inf)
    return {"kind": "trace", "gauge": t.gauge, "s": rational(t.s, precision), "rows": rows,
            "limits": jsonable(limits, precision), "contraction": rational(t.contraction, precision),
            "converged": t.converged, "notes": list(t.notes)}


def _bracket(b: RootBracket, precision: int) -> dict:
    return {"lo": rational(b.bracket.lo, precision), "hi": rational(b.bracket.hi, precision),
            "approx": rational(b.approx, precision), "exact": b.exact}


def threshold_dict(t: ThresholdResult, precision: int = DEFAULT_PRECISION) -> dict:
    return {
        "gauge": t.gauge,
        "polynomial": str(t.polynomial),
        "search_interval": str(t.search_interval),
        "tol": rational(t.tol, precision),
        "root": _bracket(t.root, precision),
        "all_real_roots": [_bracket(r, precision) for r in t.roots],
        "closed_form": t.closed_form,
        "closed_form_in_bracket": t.closed_form_in_bracket,
        "derivation": [{"description": d.description, "multiplier": d.multiplier,
                        "sign_on_interval": d.sign_on_interval} for d in t.derivation],
        "direction": jsonable(t.direction, precision),
        "flags": list(t.flags),
    }


def suite_dict(s: SuiteSummary, precision: int = DEFAULT_PRECISION) -> dict:
    return {
        "kind": "fixtures",
        "s": None if s.s is None else rational(s.s, precision),
        "counts": {"pass": s.count("pass"), "fail": s.count("fail"), "skipped": s.count("skipped"),
                   "unexpected": len(s.unexpected)},
        "fixtures": [{
            "id": o.fixture.id,
            "checker": o.fixture.checker,
            "reference": o.fixture.paper_reference,
            "expected": o.expected,
            "outcome": o.outcome,
            "matches": o.matches,
            "report": None if o.report is None else report_dict(o.report, precision),
        } for o in s.outcomes],
    }


def timestamp() -> str:
    """UTC time, taken from ``SOURCE_DATE_EPOCH`` when set so output is reproducible."""
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return when.replace(microsecond=0).isoformat().replace("+00:00", "Z")


@dataclass(frozen=True)
class ReportDocument:
    command: list
    inputs: dict
    payload: dict
    status: str  # "ok" or "violation"
    timestamp: str = field(default_factory=timestamp)
    version: str = __version__
    schema_version: int = SCHEMA_VERSION

    @property
    def exit_code(self) -> int:
        return 0 if self.status == "ok" else 1

    def as_dict(self) -> dict:
        return {"schema_version": self.schema_version, "command": self.command, "inputs": self.inputs,
                "timestamp": self.timestamp, "version": self.version, "status": self.status,
                "payload": self.payload}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        d = json.loads(text)
        return cls(d["command"], d["inputs"], d["payload"], d["status"], d["timestamp"], d["version"],
                   d["schema_version"])

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return to_csv(self)
        if fmt == "text":
            return to_text(self)
        raise ValueError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# Tabular forms
# ---------------------------------------------------------------------------

_TRACE_COLS = ("k", "inv_r", "inv_q", "inv_rtilde", "inv_qtilde", "sobolev_index", "modulation_index", "gap")
_COND_COLS = ("section", "id", "inequality", "satisfied", "verdict", "margin_num", "margin_den", "eps_order",
              "margin_decimal")


def _cell(v) -> str:
    if isinstance(v, dict) and "exact" in v:
        return v["exact"]
    return "" if v is None else str(v)


def _trace_table(p: dict) -> tuple[list[str], list[list[str]]]:
    cols = [c for c in _TRACE_COLS if p["rows"] and c in p["rows"][0]]
    return cols, [[_cell(r.get(c)) for c in cols] for r in p["rows"]]


def _condition_tables(doc: ReportDocument) -> list[list[str]]:
    out = []

    def add(section: str, rep: dict) -> None:
        for c in rep["conditions"]:
            out.append([section] + [_cell(c.get(k)) for k in _COND_COLS[1:]])
        for c in rep.get("informational", []):
            out.append([section + " (informational)"] + [_cell(c.get(k)) for k in _COND_COLS[1:]])

    p = doc.payload
    for rep in p.get("reports", []):
        add(rep["title"], rep)
    for f in p.get("fixtures", []):
        if f["report"] is not None:
            add(f["id"], f["report"])
    return out


def to_csv(doc: ReportDocument) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    p = doc.payload
    for t in p.get("traces", []):
        cols, rows = _trace_table(t)
        w.writerow(["gauge", "s"] + cols)
        w.writerows([[t["gauge"], t["s"]["exact"]] + r for r in rows])
    for t in p.get("thresholds", []):
        w.writerow(["gauge", "polynomial", "bracket_lo", "bracket_hi", "approx", "approx_decimal"])
        w.writerow([t["gauge"], t["polynomial"], t["root"]["lo"]["exact"], t["root"]["hi"]["exact"],
                    t["root"]["approx"]["exact"], t["root"]["approx"]["decimal"]])
    rows = _condition_tables(doc)
    if rows:
        w.writerow(list(_COND_COLS))
        w.writerows(rows)
    return buf.getvalue()


def _fixed_width(header: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    return [fmt.format(*header), fmt.format(*("-" * w for w in widths))] + [fmt.format(*r) for r in rows]


def to_text(doc: ReportDocument) -> str:
    lines = [f"exponent-lab {doc.version}  {' '.join(doc.command)}", f"timestamp: {doc.timestamp}",
             f"status: {doc.status}", ""]
    p = doc.payload
    for t in p.get("traces", []):
        lines.append(f"{t['gauge']} trace at s = {t['s']['exact']} (contraction {t['contraction']['exact']}, "
                     f"converged: {t['converged']})")
        cols, rows = _trace_table(t)
        dec = [[r[0]] + [_dec(t["rows"][i][c]) for c in cols[1:]] for i, r in enumerate(rows)]
        lines += _fixed_width(cols, dec)
        for k, v in t["limits"].items():
            lines.append(f"{k} = {v['exact']} ~ {v['decimal']}")
        lines += [f"note: {n}" for n in t["notes"]] + [""]
    for t in p.get("thresholds", []):
        r = t["root"]
        lines += [f"{t['gauge']} threshold: root of {t['polynomial']} in {t['search_interval']}",
                  f"  bracket [{r['lo']['decimal']}, {r['hi']['decimal']}]  approx {r['approx']['decimal']}",
                  f"  exact bracket [{r['lo']['exact']}, {r['hi']['exact']}]"]
        if t["closed_form"]:
            lines.append(f"  closed form {t['closed_form']} in bracket: {t['closed_form_in_bracket']}")
        for d in t["derivation"]:
            lines.append(f"  step: {d['description']} (multiplier {d['multiplier']}: {d['sign_on_interval']})")
        for k, v in t["direction"].items():
            lines.append(f"  direction {k}: {_cell(v)}")
        lines += [f"  flag: {f}" for f in t["flags"]] + [""]
    if "counts" in p:
        c = p["counts"]
        lines.append(f"fixtures: {c['pass']} pass, {c['fail']} fail, {c['skipped']} skipped, "
                     f"{c['unexpected']} unexpected")
        lines += _fixed_width(["id", "expected", "outcome", "matches"],
                              [[f["id"], f["expected"], f["outcome"], str(f["matches"])] for f in p["fixtures"]])
        lines.append("")
    for rep in p.get("reports", []):
        lines.append(f"{rep['title']} on {rep['domain']}: {'PASS' if rep['passed'] else 'FAIL'}")
        rows = [[c["id"], c["inequality"], "yes" if c["satisfied"] else "NO", _cell(c["verdict"])]
                for c in rep["conditions"]]
        lines += _fixed_width(["id", "inequality", "ok", "verdict"], rows)
        if rep["informational"]:
            lines.append("informational:")
            lines += _fixed_width(["id", "inequality", "ok", "verdict"],
                                  [[c["id"], c["inequality"], "yes" if c["satisfied"] else "NO", _cell(c["verdict"])]
                                   for c in rep["informational"]])
        lines += [f"note: {n}" for n in rep["notes"]] + [""]
    if p.get("error"):
        lines.append(f"error: {p['error']}")
    return "\n".join(lines).rstrip() + "\n"


def _dec(v) -> str:
    return v["decimal"] if isinstance(v, dict) and "decimal" in v else _cell(v)


def write_output(text: str, out: Optional[str]) -> None:
    if out is None:
        print(text, end="")
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
