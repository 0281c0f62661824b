"""
Matrix-class characterizations evaluated on finite corners.

Each condition is identified by a :class:`ConditionId` and reported as a
:class:`ConditionReport`. A report is *evidence*: sup-type conditions look
for a plateau (or sustained growth) of a running max over the last
``window`` rows, limit-type conditions apply a tail Cauchy test. Violations
always carry a witness index.

Condition map (``a`` is the matrix under test, ``d`` the derived matrices
built from it through the inverse weights f_{j+1}^2/(f_k f_{k+1})):

====  ==========================================================
C1    sup_n sum_k |a_nk| < oo
C2    lim_n a_nk = 0 for each k
C3    lim_n a_nk = alpha_k for each k
C4    lim_n sum_k a_nk = 0
C5    lim_n sum_k a_nk = alpha
C6    sup_K sum_n |sum_{k in K} a_nk| < oo
C7    sup_m sum_{k<=m} |d^(m)_nk| < oo for each n
C8    lim_m d^(m)_nk = d_nk for each n, k
C9    sup_n sum_k |d_nk| < oo
C10   lim_n d_nk = alpha_k for each k
C11   sup_{N,K} |sum_{n in N} sum_{k in K} d_nk| < oo
C12   lim_m sum_{k<=m} d^(m)_nk = beta_n for each n
C13   lim_n sum_k d_nk = alpha
CDelta  lim_n sum_k [(a_nk - alpha_k) - (a_{n,k+1} - alpha_{k+1})] = 0
CF1   f-lim_n a_nk = alpha_k for each k
CF2   f-lim_n sum_k a_nk = alpha
====  ==========================================================
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from . import tails
from .bandops import (
    TruncatedMatrix,
    as_prefix,
    build_B_from_A,
    build_C_from_a,
    build_D_from_A,
    build_scaled_inverse,
)
from .fibcore import DEFAULT_CACHE as _F
from .spaces import SpaceTag, Verdict, f_lim_estimate, parse_space

__all__ = [
    "ConditionId",
    "CondVerdict",
    "Outcome",
    "ConditionReport",
    "ClassVerdict",
    "DualReport",
    "PAIR_TABLE",
    "DOMAIN_TARGETS",
    "eval_condition",
    "eval_delta_condition",
    "classify_pair",
    "classify_domain_source",
    "classify_into_domain",
    "dual_membership",
    "dual_summary",
    "column_partial_sums",
    "row_differences",
    "subset_sup",
    "MAX_SUBSET_COLS",
]

MAX_SUBSET_COLS = 16


class ConditionId(str, Enum):
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"
    C5 = "C5"
    C6 = "C6"
    C7 = "C7"
    C8 = "C8"
    C9 = "C9"
    C10 = "C10"
    C11 = "C11"
    C12 = "C12"
    C13 = "C13"
    CDELTA = "CDelta"
    CF1 = "CF1"
    CF2 = "CF2"

    @property
    def anchor(self) -> str:
        return ANCHORS[self]


ANCHORS = {
    ConditionId.C1: "sup_n sum_k |a_nk| < oo",
    ConditionId.C2: "lim_n a_nk = 0 for each k",
    ConditionId.C3: "lim_n a_nk = alpha_k for each k",
    ConditionId.C4: "lim_n sum_k a_nk = 0",
    ConditionId.C5: "lim_n sum_k a_nk = alpha",
    ConditionId.C6: "sup_{K finite} sum_n |sum_{k in K} a_nk| < oo",
    ConditionId.C7: "sup_m sum_{k<=m} |d^(m)_nk| < oo for each n",
    ConditionId.C8: "lim_m d^(m)_nk = d_nk for each n, k",
    ConditionId.C9: "sup_n sum_k |d_nk| < oo",
    ConditionId.C10: "lim_n d_nk = alpha_k for each k",
    ConditionId.C11: "sup_{N,K finite} |sum_{n in N} sum_{k in K} d_nk| < oo",
    ConditionId.C12: "lim_m sum_{k<=m} d^(m)_nk = beta_n for each n",
    ConditionId.C13: "lim_n sum_k d_nk = alpha",
    ConditionId.CDELTA: "lim_n sum_k [(a_nk - alpha_k) - (a_n,k+1 - alpha_k+1)] = 0",
    ConditionId.CF1: "f-lim_n a_nk = alpha_k for each k",
    ConditionId.CF2: "f-lim_n sum_k a_nk = alpha",
}


class CondVerdict(str, Enum):
    SATISFIED = "satisfied-evidence"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


class Outcome(str, Enum):
    MEMBER = "member-evidence"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ConditionReport:
    id: ConditionId
    verdict: CondVerdict
    trace: list[Fraction]
    witness: tuple[int, ...] | None = None
    extracted: dict | None = None
    note: str = ""

    def __post_init__(self) -> None:
        if self.verdict is CondVerdict.VIOLATED and self.witness is None:
            raise ValueError(f"{self.id.value}: a violation needs a witness")
        if self.extracted is not None and self.verdict is not CondVerdict.SATISFIED:
            self.extracted = None

    @property
    def anchor(self) -> str:
        return self.id.anchor


@dataclass
class ClassVerdict:
    pair: tuple[str, str]
    required: list[ConditionId]
    reports: dict[ConditionId, ConditionReport]
    overall: Outcome = field(init=False)
    note: str = ""

    def __post_init__(self) -> None:
        self.overall = _aggregate(self.reports[i] for i in self.required)


@dataclass
class DualReport:
    set_id: str
    verdict: CondVerdict
    trace: list[Fraction]
    witness: tuple[int, ...] | None = None
    extracted: dict | None = None
    note: str = ""


def _aggregate(reports) -> Outcome:
    verdicts = [r.verdict for r in reports]
    if any(v is CondVerdict.VIOLATED for v in verdicts):
        return Outcome.VIOLATED
    if all(v is CondVerdict.SATISFIED for v in verdicts):
        return Outcome.MEMBER
    return Outcome.INCONCLUSIVE


# -- generic evidence rules ----------------------------------------------------

def _sup_report(cid, values: Sequence[Fraction], window: int, tol: float = 0,
                offset: int = 0, note: str = "") -> ConditionReport:
    """Running max settled to within tol -> satisfied; sustained growth -> violated."""
    values = list(values)
    if len(values) <= window:
        raise ValueError(f"{cid.value}: need more than {window} rows, got {len(values)}")
    best = max(values)
    if tails.unbounded_trend(values, window):
        return ConditionReport(cid, CondVerdict.VIOLATED, values,
                               (offset + len(values) - 1,),
                               note=note or "running max grows at every step of the final window")
    if tails.plateaued(values, window, tol):
        at = values.index(best)
        return ConditionReport(cid, CondVerdict.SATISFIED, values,
                               extracted={"sup": best, "attained_at": at}, note=note)
    return ConditionReport(cid, CondVerdict.INCONCLUSIVE, values, note=note)


def _limit_status(values: Sequence[Fraction], window: int, tol: float,
                  target: Fraction | None):
    """Return (verdict, witness position or None)."""
    values = list(values)
    if len(values) < window:
        raise ValueError(f"need at least {window} values, got {len(values)}")
    tol_q = Fraction(tol)
    if tails.tail_spread(values, window) < tol_q:
        if target is not None and abs(values[-1] - target) >= tol_q:
            return CondVerdict.VIOLATED, len(values) - 1
        return CondVerdict.SATISFIED, None
    if tails.oscillation_persists(values, window):
        tail = values[-window:]
        dev = [abs(v - values[-1]) for v in tail]
        return CondVerdict.VIOLATED, len(values) - window + dev.index(max(dev))
    return CondVerdict.INCONCLUSIVE, None


def _limit_report(cid, values, window, tol, target=None, name="alpha",
                  note="") -> ConditionReport:
    values = list(values)
    v, w = _limit_status(values, window, tol, target)
    extracted = {name: values[-1]} if v is CondVerdict.SATISFIED else None
    return ConditionReport(cid, v, values, None if w is None else (w,),
                           extracted, note)


def _tested_columns(M: TruncatedMatrix, window: int) -> int:
    """Columns k <= rows - 2*window have enough rows below them to test."""
    n = min(M.cols, M.rows - 2 * window + 1)
    if n < 1:
        raise ValueError(
            f"matrix too small: {M.rows} rows cannot test columns with window {window}"
        )
    return n


def _columns_report(cid, M: TruncatedMatrix, window, tol, zero: bool,
                    note="") -> ConditionReport:
    ncols = _tested_columns(M, window)
    target = Fraction(0) if zero else None
    finals, pending = [], False
    for k in range(ncols):
        col = M.column(k)
        v, w = _limit_status(col, window, tol, target)
        if v is CondVerdict.VIOLATED:
            return ConditionReport(cid, v, col, (w, k),
                                   note=note or f"column {k} at row {w}")
        pending |= v is CondVerdict.INCONCLUSIVE
        finals.append(col[-1])
    if pending:
        return ConditionReport(cid, CondVerdict.INCONCLUSIVE, finals, note=note)
    return ConditionReport(cid, CondVerdict.SATISFIED, finals,
                           extracted={"alpha_k": finals}, note=note)


def _flim_columns_report(cid, M: TruncatedMatrix, window, tol, zero: bool,
                         note="") -> ConditionReport:
    ncols = _tested_columns(M, window)
    limits, pending = [], False
    for k in range(ncols):
        col = M.column(k)
        v = f_lim_estimate(col, tol, null=zero)
        if v.verdict is Verdict.NON_MEMBER:
            return ConditionReport(cid, CondVerdict.VIOLATED, col, (len(col) - 1, k),
                                   note=note or f"column {k}: {v.note}")
        pending |= v.verdict is Verdict.INCONCLUSIVE
        limits.append(col[-1])
    if pending:
        return ConditionReport(cid, CondVerdict.INCONCLUSIVE, limits, note=note)
    return ConditionReport(cid, CondVerdict.SATISFIED, limits,
                           extracted={"alpha_k_last": limits}, note=note)


def _flim_report(cid, values, tol, zero: bool, note="") -> ConditionReport:
    values = list(values)
    v = f_lim_estimate(values, tol, null=zero)
    if v.verdict is Verdict.NON_MEMBER:
        return ConditionReport(cid, CondVerdict.VIOLATED, values,
                               (len(values) - 1,), note=note or v.note)
    if v.verdict is Verdict.MEMBER:
        return ConditionReport(cid, CondVerdict.SATISFIED, values,
                               extracted={"alpha": v.limit_estimate}, note=note)
    return ConditionReport(cid, CondVerdict.INCONCLUSIVE, values, note=note)


# -- subset sups ---------------------------------------------------------------

def _subset_values(M: TruncatedMatrix, cap: int, mode: str, window: int):
    """Exact subset sums over the first ``cap`` columns.

    Returns (value of every subset mask at the full row count, sup over masks
    at each row count N = rows-window .. rows). ``mode`` is ``"abs"`` for
    sum_n |s_n| or ``"split"`` for max(sum_n s_n^+, sum_n s_n^-).
    """
    rows = M.rows
    if rows <= window:
        raise ValueError(f"need more than {window} rows for the subset sup")
    if not 1 <= cap <= M.cols:
        raise ValueError(f"cap must lie in 1..{M.cols}")
    sub = [r[:cap] for r in M.entries]
    L = 1
    for r in sub:
        for q in r:
            L = lcm(L, q.denominator)
    ints = [[q.numerator * (L // q.denominator) for q in r] for r in sub]
    bound = max((sum(abs(v) for v in r) for r in ints), default=0) * rows
    nmask = 1 << cap
    lo = rows - window - 1

    if bound < 2 ** 62:
        A = np.array(ints, dtype=np.int64).reshape(rows, cap)
        full = np.zeros(nmask, dtype=np.int64)
        sup_by_rows = np.zeros(window + 1, dtype=np.int64)
        idx = np.arange(nmask, dtype=np.int64)
        bits = ((idx[None, :] >> np.arange(cap, dtype=np.int64)[:, None]) & 1)
        chunk = 4096
        for s in range(0, nmask, chunk):
            S = A @ bits[:, s:s + chunk]
            if mode == "abs":
                cum = np.cumsum(np.abs(S), axis=0)
            else:
                cum = np.maximum(np.cumsum(np.maximum(S, 0), axis=0),
                                 np.cumsum(np.maximum(-S, 0), axis=0))
            full[s:s + chunk] = cum[-1]
            sup_by_rows = np.maximum(sup_by_rows, cum[lo:].max(axis=1))
        full_vals = [int(v) for v in full]
        sup_vals = [int(v) for v in sup_by_rows]
    else:
        cols = [[r[k] for r in ints] for k in range(cap)]
        s = [0] * rows
        full_vals = [0] * nmask
        sup_vals = [0] * (window + 1)
        prev = 0
        for i in range(1, nmask):
            g = i ^ (i >> 1)
            k = (g ^ prev).bit_length() - 1
            col = cols[k]
            if g & (1 << k):
                s = [a + b for a, b in zip(s, col)]
            else:
                s = [a - b for a, b in zip(s, col)]
            prev = g
            if mode == "abs":
                acc, run = 0, []
                for v in s:
                    acc += abs(v)
                    run.append(acc)
            else:
                p = q = 0
                run = []
                for v in s:
                    if v > 0:
                        p += v
                    else:
                        q -= v
                    run.append(max(p, q))
            full_vals[g] = run[-1]
            for j, v in enumerate(run[lo:]):
                if v > sup_vals[j]:
                    sup_vals[j] = v
    scale = Fraction(1, L)
    return [v * scale for v in full_vals], [v * scale for v in sup_vals]


def _by_cap(full_vals: list[Fraction], cap: int) -> list[Fraction]:
    """best[c-1] = max over nonempty subsets of the first c columns."""
    out, best = [], Fraction(0)
    for c in range(1, cap + 1):
        for mask in range(1 << (c - 1), 1 << c):
            if full_vals[mask] > best:
                best = full_vals[mask]
        out.append(best)
    return out


def subset_sup(M: TruncatedMatrix, cap: int, mode: str = "abs") -> list[Fraction]:
    """Exhaustive subset sup over the first c columns, for c = 1..cap."""
    if cap > MAX_SUBSET_COLS:
        raise ValueError(f"subset search over {cap} columns exceeds {MAX_SUBSET_COLS}")
    if not 1 <= cap <= M.cols:
        raise ValueError(f"cap must lie in 1..{M.cols}")
    full_vals, _ = _subset_values(M, cap, mode, 0)
    return _by_cap(full_vals, cap)


def _entry_mass(M: TruncatedMatrix, window: int) -> list[Fraction]:
    """sum_{n<N} sum_k |a_nk| for N = rows-window .. rows."""
    per_row = [sum((abs(a) for a in r), Fraction(0)) for r in M.entries]
    out, acc = [], Fraction(0)
    for n, v in enumerate(per_row):
        acc += v
        if n >= M.rows - window - 1:
            out.append(acc)
    return out


def _subset_report(cid, M: TruncatedMatrix, window, tol, mode,
                   subset_cols: int | None = None, note="") -> ConditionReport:
    """Exact subset sup over the first columns, cross-checked by the entry mass.

    Both sups are squeezed between (1/4) sum_{n,k} |a_nk| and the mass
    itself, so growth of the mass over every column also decides them;
    this covers columns beyond the exhaustive-search cap.
    """
    cap = min(M.cols, MAX_SUBSET_COLS) if subset_cols is None else subset_cols
    if cap > MAX_SUBSET_COLS:
        raise ValueError(f"subset search over {cap} columns exceeds {MAX_SUBSET_COLS}")
    full_vals, sup_rows = _subset_values(M, cap, mode, window)
    trace = _by_cap(full_vals, cap)
    mass = _entry_mass(M, window)
    tol_q = Fraction(tol)
    if (tails.unbounded_trend(sup_rows, window, span=M.rows)
            or tails.unbounded_trend(mass, window, span=M.rows)):
        return ConditionReport(cid, CondVerdict.VIOLATED, trace, (M.rows - 1,),
                               note=note or "subset sums keep growing with every added row")
    if sup_rows[-1] - sup_rows[0] < tol_q and mass[-1] - mass[0] < tol_q:
        return ConditionReport(cid, CondVerdict.SATISFIED, trace,
                               extracted={"sup": sup_rows[-1], "entry_mass": mass[-1]},
                               note=note)
    return ConditionReport(cid, CondVerdict.INCONCLUSIVE, trace, note=note)


# -- conditions on a plain matrix ---------------------------------------------

_PLAIN = {ConditionId.C1, ConditionId.C2, ConditionId.C3, ConditionId.C4,
          ConditionId.C5, ConditionId.C6, ConditionId.CF1, ConditionId.CF2}
_LADDER = {ConditionId.C7, ConditionId.C8, ConditionId.C12}
_ON_D = {ConditionId.C9: ConditionId.C1, ConditionId.C10: ConditionId.C3,
         ConditionId.C11: ConditionId.C6, ConditionId.C13: ConditionId.C5}


def _plain(M: TruncatedMatrix, cid: ConditionId, tol, window, zero=False,
           label: ConditionId | None = None, subset_cols=None,
           note="") -> ConditionReport:
    out = label or cid
    if cid is ConditionId.C1:
        return _sup_report(out, [sum((abs(a) for a in r), Fraction(0))
                                 for r in M.entries], window, tol, note=note)
    if cid is ConditionId.C2 or (cid is ConditionId.C3 and zero):
        return _columns_report(out, M, window, tol, zero=True, note=note)
    if cid is ConditionId.C3:
        return _columns_report(out, M, window, tol, zero=False, note=note)
    if cid is ConditionId.C4 or (cid is ConditionId.C5 and zero):
        return _limit_report(out, M.row_sums(), window, tol, Fraction(0), note=note)
    if cid is ConditionId.C5:
        return _limit_report(out, M.row_sums(), window, tol, note=note)
    if cid is ConditionId.C6:
        mode = "split" if out is ConditionId.C11 else "abs"
        return _subset_report(out, M, window, tol, mode, subset_cols, note)
    if cid is ConditionId.CF1:
        return _flim_columns_report(out, M, window, tol, zero, note)
    if cid is ConditionId.CF2:
        return _flim_report(out, M.row_sums(), tol, zero, note)
    raise ValueError(f"{cid.value} is not a plain-matrix condition")




# -- conditions on the truncation ladder D^(m) --------------------------------

@dataclass
class _LadderRow:
    """Sequences over m for one row n: sum_k |d^(m)_nk| and sum_k d^(m)_nk.

    For a closed row the sequences stop at the last nonzero entry; every
    later value is equal to the final one.
    """

    abs_sums: list[Fraction]
    sums: list[Fraction]
    spread_last: Fraction
    spread_prev: Fraction


def _ladder_row(row: Sequence[Fraction], closed: bool, window: int) -> _LadderRow:
    cols = len(row)
    W, acc = [], Fraction(0)
    for j, a in enumerate(row):
        if a:
            acc += a * _F[j + 1] ** 2
        W.append(acc)
    if closed:
        stop = max((j for j, a in enumerate(row) if a), default=0)
    else:
        stop = cols - 1
    weights = [Fraction(1, _F[k] * _F[k + 1]) for k in range(stop + 1)]
    abs_sums, sums = [], []
    H = G = Fraction(0)
    for m in range(stop + 1):
        H += weights[m]
        G += (W[m - 1] if m else 0) * weights[m]
        sums.append(W[m] * H - G)
        wm = W[m]
        abs_sums.append(sum((abs(wm - (W[k - 1] if k else 0)) * weights[k]
                             for k in range(m + 1)), Fraction(0)))
    last = tails.spread(W[-window:])
    prev = tails.spread(W[-2 * window:-window]) if cols >= 2 * window else Fraction(0)
    return _LadderRow(abs_sums, sums, last, prev)


def _ladder_report(cid, A: TruncatedMatrix, rows: list[_LadderRow], tol,
                   window) -> ConditionReport:
    tol_q = Fraction(tol)
    closed = A.row_closed
    trace, pending = [], False
    for n, lr in enumerate(rows):
        if cid is ConditionId.C7:
            trace.append(max(lr.abs_sums))
            if closed:
                continue
            if tails.unbounded_trend(lr.abs_sums, window):
                return ConditionReport(cid, CondVerdict.VIOLATED, lr.abs_sums,
                                       (n, A.cols - 1),
                                       note=f"row {n}: sum_k |d^(m)_nk| grows with m")
            pending |= not tails.plateaued(lr.abs_sums, window, tol)
        elif cid is ConditionId.C12:
            trace.append(lr.sums[-1])
            if closed:
                continue
            v, w = _limit_status(lr.sums, window, tol, None)
            if v is CondVerdict.VIOLATED:
                return ConditionReport(cid, v, lr.sums, (n, w), note=f"row {n}")
            pending |= v is CondVerdict.INCONCLUSIVE
        else:
            # d^(m)_nk moves by (W[m] - W[m'])/(f_k f_{k+1}); k = 0 has weight 1,
            # the largest, so it decides every column of the row.
            trace.append(lr.spread_last)
            if closed or lr.spread_last < tol_q:
                continue
            if lr.spread_prev and lr.spread_last >= lr.spread_prev:
                return ConditionReport(cid, CondVerdict.VIOLATED, trace, (n, 0),
                                       note=f"row {n}: d^(m)_n0 keeps oscillating in m")
            pending = True
    if pending:
        return ConditionReport(cid, CondVerdict.INCONCLUSIVE, trace)
    name = {ConditionId.C7: "sup_m", ConditionId.C12: "beta_n",
            ConditionId.C8: "tail_spread"}[cid]
    return ConditionReport(cid, CondVerdict.SATISFIED, trace, extracted={name: trace},
                           note="closed rows: exact values" if closed else "")


def _ladder_rows(A: TruncatedMatrix, window: int) -> list[_LadderRow]:
    if A.cols <= window and not A.row_closed:
        raise ValueError(f"need more than {window} columns for the m-ladder")
    return [_ladder_row(r, A.row_closed, window) for r in A.entries]


def _effective_D(A: TruncatedMatrix, tol, window):
    """D restricted to the columns whose series the corner can judge.

    Returns (D, converged) where ``converged`` is False when some entry's
    partial sums have not settled.
    """
    D, flags = build_D_from_A(A, tol, window)
    if A.row_closed:
        return D, True
    kd = A.cols - window + 1
    grid = [r[:kd] for r in D.entries]
    ok = all(all(f[:kd]) for f in flags)
    return TruncatedMatrix(D.rows, kd, grid, D.provenance, False), ok


# -- public evaluators ---------------------------------------------------------

def eval_condition(A: TruncatedMatrix, id: ConditionId | str, tol: float = 1e-8,
                   window: int = 8, subset_cols: int | None = None) -> ConditionReport:
    """Evaluate one condition on a corner.

    C1-C6 and CF1/CF2 read ``A`` directly; C7, C8, C12 read the ladder
    D^(m) built from ``A``; C9, C10, C11, C13 read D. CDelta needs the
    column limits and lives in :func:`eval_delta_condition`.
    """
    cid = ConditionId(id)
    if cid in _PLAIN:
        return _plain(A, cid, tol, window, subset_cols=subset_cols)
    if cid in _LADDER:
        return _ladder_report(cid, A, _ladder_rows(A, window), tol, window)
    if cid in _ON_D:
        D, ok = _effective_D(A, tol, window)
        rep = _plain(D, _ON_D[cid], tol, window, label=cid, subset_cols=subset_cols)
        return rep if ok else _unsettled(rep)
    raise ValueError("CDelta needs alphas: use eval_delta_condition")


def _unsettled(rep: ConditionReport) -> ConditionReport:
    return ConditionReport(rep.id, CondVerdict.INCONCLUSIVE, rep.trace,
                           note="entries of D have not settled at this truncation")


def eval_delta_condition(A: TruncatedMatrix, alphas: Sequence, tol: float = 1e-8,
                         window: int = 8) -> ConditionReport:
    """Row sums over k = 0..cols-2 of (a_nk - alpha_k) - (a_{n,k+1} - alpha_{k+1}), tested -> 0."""
    alphas = as_prefix(alphas)
    if len(alphas) < A.cols:
        raise ValueError(f"need {A.cols} alphas, got {len(alphas)}")
    values = []
    for r in A.entries:
        acc = Fraction(0)
        for k in range(A.cols - 1):
            acc += (r[k] - alphas[k]) - (r[k + 1] - alphas[k + 1])
        values.append(acc)
    return _limit_report(ConditionId.CDELTA, values, window, tol, Fraction(0))


# -- classical pairs -----------------------------------------------------------

_S = SpaceTag
_I = ConditionId

PAIR_TABLE: dict[tuple[SpaceTag, SpaceTag], list[ConditionId]] = {
    (_S.C0, _S.C0): [_I.C1, _I.C2],
    (_S.C0, _S.C): [_I.C1, _I.C3],
    (_S.C, _S.C0): [_I.C1, _I.C2, _I.C4],
    (_S.C, _S.C): [_I.C1, _I.C3, _I.C5],
    (_S.C0, _S.ELL_INF): [_I.C1],
    (_S.C, _S.ELL_INF): [_I.C1],
    (_S.C0, _S.ELL_1): [_I.C6],
    (_S.C, _S.ELL_1): [_I.C6],
    (_S.F, _S.C): [_I.C1, _I.C3, _I.C5, _I.CDELTA],
    (_S.F, _S.C0): [_I.C1, _I.C2, _I.C4, _I.CDELTA],
    (_S.C, _S.F): [_I.C1, _I.CF1, _I.CF2],
}


def classify_pair(A: TruncatedMatrix, source, target, tol: float = 1e-8,
                  window: int = 8) -> ClassVerdict:
    """Aggregate the conditions characterizing A in (source, target)."""
    src, tgt = parse_space(source), parse_space(target)
    try:
        required = PAIR_TABLE[(src, tgt)]
    except KeyError:
        raise ValueError(f"unsupported pair ({src.value}, {tgt.value})") from None
    reports: dict[ConditionId, ConditionReport] = {}
    zero = tgt is _S.C0
    for cid in required:
        if cid is _I.CDELTA:
            col = reports.get(_I.C3) or reports.get(_I.C2)
            if zero:
                alphas = [Fraction(0)] * A.cols
            elif col is not None and col.verdict is CondVerdict.SATISFIED:
                alphas = col.extracted["alpha_k"]
                alphas = alphas + [alphas[-1]] * (A.cols - len(alphas))
            else:
                reports[cid] = ConditionReport(cid, CondVerdict.INCONCLUSIVE, [],
                                               note="column limits unavailable")
                continue
            reports[cid] = eval_delta_condition(A, alphas, tol, window)
        else:
            reports[cid] = _plain(A, cid, tol, window)
    return ClassVerdict((src.value, tgt.value), list(required), reports)


# -- matrices on the domain spaces --------------------------------------------

def column_partial_sums(A: TruncatedMatrix) -> TruncatedMatrix:
    """a(n,k) = sum_{j<=n} a_jk."""
    grid, acc = [], [Fraction(0)] * A.cols
    for r in A.entries:
        acc = [s + a for s, a in zip(acc, r)]
        grid.append(list(acc))
    return TruncatedMatrix(A.rows, A.cols, grid, f"colsums({A.provenance})",
                           A.row_closed)


def row_differences(A: TruncatedMatrix) -> TruncatedMatrix:
    """a_nk - a_{n-1,k}, row 0 unchanged."""
    grid = [list(A.entries[0])] + [
        [b - a for a, b in zip(p, c)] for p, c in zip(A.entries, A.entries[1:])
    ]
    return TruncatedMatrix(A.rows, A.cols, grid, f"rowdiff({A.provenance})",
                           A.row_closed)


DOMAIN_TARGETS = (_S.C0, _S.C, _S.CS, _S.CS0, _S.ELL_INF, _S.BS, _S.ELL_1,
                  _S.BV1, _S.F, _S.F0, _S.FS)

# (condition on D or A, forced zero limit) per target, before the source-specific
# ladder conditions are prepended.
_D_CONDITIONS = {
    _S.C0: [(_I.C9, False), (_I.C10, True)],
    _S.C: [(_I.C9, False), (_I.C10, False)],
    _S.ELL_INF: [(_I.C9, False)],
    _S.ELL_1: [(_I.C11, False)],
    _S.F: [(_I.C9, False), (_I.CF1, False)],
    _S.F0: [(_I.C9, False), (_I.CF1, True)],
}
_VIA = {_S.CS: _S.C, _S.CS0: _S.C0, _S.BS: _S.ELL_INF, _S.BV1: _S.ELL_1,
        _S.FS: _S.F}


def _domain_plan(source: SpaceTag, base: SpaceTag) -> list[tuple[ConditionId, bool]]:
    plan = [(_I.C7, False), (_I.C8, False)]
    if source is _S.C_FHAT:
        plan.append((_I.C12, False))
    plan += _D_CONDITIONS[base]
    if source is _S.C_FHAT:
        if base is _S.C:
            plan.append((_I.C13, False))
        elif base is _S.C0:
            plan.append((_I.C13, True))
        elif base in (_S.F, _S.F0):
            plan.append((_I.CF2, base is _S.F0))
    return plan


def classify_domain_source(A: TruncatedMatrix, source, target, tol: float = 1e-8,
                           window: int = 8) -> ClassVerdict:
    """A in (c0_fhat, target) or (c_fhat, target) through the ladder D^(m) and D.

    Series targets (cs, cs0, bs, fs) run on the column partial sums of A,
    bv1 on its row differences.
    """
    src, tgt = parse_space(source), parse_space(target)
    if src not in (_S.C0_FHAT, _S.C_FHAT):
        raise ValueError(f"source must be c0_fhat or c_fhat, got {src.value}")
    if tgt not in DOMAIN_TARGETS:
        raise ValueError(f"unsupported target {tgt.value}")
    base = _VIA.get(tgt, tgt)
    note = ""
    M = A
    if tgt in (_S.CS, _S.CS0, _S.BS, _S.FS):
        M = column_partial_sums(A)
        note = "conditions evaluated on a(n,k) = sum_{j<=n} a_jk"
    elif tgt is _S.BV1:
        M = row_differences(A)
        note = "conditions evaluated on a_nk - a_{n-1,k}"
    plan = _domain_plan(src, base)
    reports: dict[ConditionId, ConditionReport] = {}
    ladder = None
    D = None
    settled = True
    for cid, zero in plan:
        if cid in _LADDER:
            if ladder is None:
                ladder = _ladder_rows(M, window)
            reports[cid] = _ladder_report(cid, M, ladder, tol, window)
            continue
        if D is None:
            D, settled = _effective_D(M, tol, window)
        inner = _ON_D.get(cid, cid)
        rep = _plain(D, inner, tol, window, zero=zero, label=cid)
        reports[cid] = rep if settled else _unsettled(rep)
    return ClassVerdict((src.value, tgt.value), [c for c, _ in plan], reports, note)


def classify_into_domain(A: TruncatedMatrix, source, target, tol: float = 1e-8,
                         window: int = 8) -> ClassVerdict:
    """A in (source, c0_fhat or c_fhat) iff B = fhat-rows-of-A is in (source, c0 or c)."""
    src, tgt = parse_space(source), parse_space(target)
    if tgt not in (_S.C0_FHAT, _S.C_FHAT):
        raise ValueError(f"target must be c0_fhat or c_fhat, got {tgt.value}")
    if src not in (_S.F, _S.C, _S.C0):
        raise ValueError(f"unsupported source {src.value}")
    under = _S.C0 if tgt is _S.C0_FHAT else _S.C
    B = build_B_from_A(A)
    inner = classify_pair(B, src, under, tol, window)
    return ClassVerdict((src.value, tgt.value), inner.required, inner.reports,
                        f"conditions evaluated on b_nk (pair {src.value} -> {under.value})")


# -- duals ---------------------------------------------------------------------

DUAL_SETS = ("d1", "d2", "d3", "d4")


def dual_membership(a: Sequence, set_id: str, tol: float = 1e-8,
                    window: int = 8) -> DualReport:
    """Evidence that ``a`` lies in d1 (subset sup of a_n times inverse rows),
    d2 (sup of row abs-sums of C), d3 (columns of C converge) or d4 (row
    sums of C converge), with c_nk = sum_{j=k}^{n} a_j f_{j+1}^2/(f_k f_{k+1})."""
    a = as_prefix(a)
    if len(a) < 2 * window:
        raise ValueError(f"prefix of length {len(a)} is shorter than 2*window")
    sid = set_id.lower()
    if sid == "d1":
        rep = _subset_report(_I.C6, build_scaled_inverse(a), window, tol, "abs")
    elif sid in ("d2", "d3", "d4"):
        C = build_C_from_a(a)
        cid = {"d2": _I.C1, "d3": _I.C3, "d4": _I.C5}[sid]
        rep = _plain(C, cid, tol, window)
    else:
        raise ValueError(f"unknown dual set {set_id!r}")
    return DualReport(sid, rep.verdict, rep.trace, rep.witness, rep.extracted, rep.note)


def dual_summary(a: Sequence, tol: float = 1e-8, window: int = 8) -> dict[str, CondVerdict]:
    """Verdicts for d1..d4 and the alpha, beta and gamma duals built from them."""
    rep = {s: dual_membership(a, s, tol, window).verdict for s in DUAL_SETS}

    def meet(*ids):
        return _aggregate_cond([rep[i] for i in ids])

    out = dict(rep)
    out["alpha"] = rep["d1"]
    out["beta_c0_fhat"] = meet("d2", "d3")
    out["beta_c_fhat"] = meet("d2", "d3", "d4")
    out["gamma"] = rep["d2"]
    return out


def _aggregate_cond(verdicts) -> CondVerdict:
    if any(v is CondVerdict.VIOLATED for v in verdicts):
        return CondVerdict.VIOLATED
    if all(v is CondVerdict.SATISFIED for v in verdicts):
        return CondVerdict.SATISFIED
    return CondVerdict.INCONCLUSIVE
