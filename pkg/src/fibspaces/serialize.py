"""JSON / CSV exchange formats.

Rationals are written as canonical ``"p/q"`` strings (``"p"`` when q = 1).

* sequence: ``{"name": ..., "terms": ["p/q", ...]}``; CSV has one term per line
* matrix: ``{"rows", "cols", "entries": [["p/q", ...], ...], "provenance"}``
  plus an optional ``"row_closed"`` flag; CSV has one matrix row per line
* class report: ``{"pair", "conditions": [{"id", "anchor", "verdict",
  "witness"?, "extracted"?, "trace_tail"}], "overall"}``
"""

from __future__ import annotations

import csv
import io
import json
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .bandops import TruncatedMatrix
from .classify import ClassVerdict, ConditionReport, DualReport
from .spaces import MembershipVerdict
from .tails import to_float


def fmt_q(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_q(text: str | int | float) -> Fraction:
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        return Fraction(str(text))
    s = str(text).strip()
    if not s:
        raise ValueError("empty rational")
    return Fraction(s)


def decimal_str(q: Fraction, digits: int = 20) -> str:
    """Approximate decimal rendering rounded to ``digits`` places, trailing zeros dropped."""
    q = Fraction(q)
    with localcontext() as ctx:
        ctx.prec = digits + len(str(abs(q.numerator) // q.denominator)) + 2
        d = (Decimal(q.numerator) / Decimal(q.denominator)).quantize(Decimal(1).scaleb(-digits))
    text = format(d, "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _plain(v: Any) -> Any:
    if isinstance(v, Fraction):
        return fmt_q(v)
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if hasattr(v, "value"):
        return v.value
    return v


# -- sequences -----------------------------------------------------------------

def seq_to_dict(terms: Sequence[Fraction], name: str | None = None,
                decimal: int | None = None, **extra) -> dict:
    out: dict[str, Any] = {}
    if name:
        out["name"] = name
    out.update(extra)
    out["terms"] = [fmt_q(t) for t in terms]
    if decimal:
        out["terms_decimal_approx"] = [decimal_str(t, decimal) for t in terms]
    return out


def seq_from_dict(obj: dict) -> list[Fraction]:
    if not isinstance(obj, dict) or "terms" not in obj:
        raise ValueError("sequence JSON needs a 'terms' list")
    return [parse_q(t) for t in obj["terms"]]


def seq_to_csv(terms: Sequence[Fraction], decimal: int | None = None) -> str:
    if decimal:
        return "".join(f"{fmt_q(t)},{decimal_str(t, decimal)}\n" for t in terms)
    return "".join(fmt_q(t) + "\n" for t in terms)


def seq_from_csv(text: str) -> list[Fraction]:
    out = []
    for row in csv.reader(io.StringIO(text)):
        if row and row[0].strip():
            out.append(parse_q(row[0]))
    return out


def load_sequence(text: str, fmt: str | None = None) -> list[Fraction]:
    """Parse sequence text; JSON is tried first unless ``fmt == 'csv'``."""
    if fmt != "csv":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError:
            if fmt == "json":
                raise ValueError("malformed sequence JSON") from None
        else:
            if isinstance(obj, list):
                return [parse_q(t) for t in obj]
            return seq_from_dict(obj)
    return seq_from_csv(text)


# -- matrices ------------------------------------------------------------------

def matrix_to_dict(A: TruncatedMatrix) -> dict:
    return {
        "rows": A.rows,
        "cols": A.cols,
        "entries": [[fmt_q(q) for q in r] for r in A.entries],
        "provenance": A.provenance,
        "row_closed": A.row_closed,
    }


def matrix_from_dict(obj: dict) -> TruncatedMatrix:
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        grid = [[parse_q(q) for q in r] for r in obj["entries"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed matrix JSON: {exc}") from None
    return TruncatedMatrix(rows, cols, grid, str(obj.get("provenance", "file")),
                           bool(obj.get("row_closed", False)))


def matrix_to_csv(A: TruncatedMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in A.entries:
        w.writerow([fmt_q(q) for q in r])
    return buf.getvalue()


def matrix_from_csv(text: str, provenance: str = "csv") -> TruncatedMatrix:
    grid = [[parse_q(q) for q in row]
            for row in csv.reader(io.StringIO(text)) if row]
    if not grid:
        raise ValueError("empty matrix CSV")
    return TruncatedMatrix.from_rows(grid, provenance)


def load_matrix(text: str, fmt: str | None = None) -> TruncatedMatrix:
    if fmt != "csv":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError:
            if fmt == "json":
                raise ValueError("malformed matrix JSON") from None
        else:
            return matrix_from_dict(obj)
    return matrix_from_csv(text)


# -- reports -------------------------------------------------------------------

def _extracted(ex: dict | None) -> dict | None:
    if ex is None:
        return None
    out = _plain(ex)
    approx = {k: to_float(v) for k, v in ex.items() if isinstance(v, Fraction)}
    if approx:
        out["approx"] = approx
    return out


def condition_to_dict(rep: ConditionReport | DualReport, tail: int = 8) -> dict:
    out: dict[str, Any] = {}
    if isinstance(rep, DualReport):
        out["set"] = rep.set_id
    else:
        out["id"] = rep.id.value
        out["anchor"] = rep.anchor
    out["verdict"] = rep.verdict.value
    if rep.witness is not None:
        out["witness"] = list(rep.witness)
    ex = _extracted(rep.extracted)
    if ex is not None:
        out["extracted"] = ex
    out["trace_tail"] = [fmt_q(v) for v in rep.trace[-tail:]]
    if rep.note:
        out["note"] = rep.note
    return out


def verdict_to_dict(v: ClassVerdict, tail: int = 8) -> dict:
    out = {
        "pair": list(v.pair),
        "conditions": [condition_to_dict(v.reports[c], tail) for c in v.required],
        "overall": v.overall.value,
    }
    if v.note:
        out["note"] = v.note
    return out


def verdict_to_csv(v: ClassVerdict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["pair", "id", "anchor", "verdict", "witness", "last_trace"])
    for c in v.required:
        r = v.reports[c]
        w.writerow([f"{v.pair[0]}->{v.pair[1]}", r.id.value, r.anchor, r.verdict.value,
                    " ".join(map(str, r.witness or ())),
                    fmt_q(r.trace[-1]) if r.trace else ""])
    w.writerow([f"{v.pair[0]}->{v.pair[1]}", "overall", "", v.overall.value, "", ""])
    return buf.getvalue()


def membership_to_dict(m: MembershipVerdict) -> dict:
    out = {
        "space": m.space.value,
        "verdict": m.verdict.value,
        "limit_estimate": m.limit_estimate,
        "tail_oscillation": m.tail_oscillation,
    }
    if m.exact_witness:
        out["exact_witness"] = m.exact_witness
    if m.note:
        out["note"] = m.note
    return out


def rows_to_csv(header: Iterable[str], rows: Iterable[Iterable[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(header))
    for r in rows:
        w.writerow([fmt_q(x) if isinstance(x, Fraction) else _plain(x) for x in r])
    return buf.getvalue()
