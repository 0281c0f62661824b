"""Command-line front end.

Exit codes: 0 member evidence / success, 1 violated, 2 identity failure,
3 inconclusive, 64 usage error or unsupported pair, 65 bad input data.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import fibcore, serialize
from .bandops import (
    BandMatrixSpec,
    TruncatedMatrix,
    apply,
    apply_fhat_inverse,
    roundtrip_check,
)
from .classify import (
    DUAL_SETS,
    PAIR_TABLE,
    ConditionId,
    CondVerdict,
    Outcome,
    classify_domain_source,
    classify_into_domain,
    classify_pair,
    dual_membership,
    eval_condition,
)
from .spaces import (
    SEQUENCE_NAMES,
    SpaceTag,
    Verdict,
    basis_c_minus1,
    basis_coefficients,
    basis_sequence,
    counterexample,
    f_lim_estimate,
    membership_estimate,
    parse_space,
    reconstruct,
    t_matrix,
)
from .tails import to_float

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_IDENTITY = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64
EXIT_DATA = 65

ALMOST_TOL = 1e-2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


_OUTCOME_EXIT = {Outcome.MEMBER: EXIT_OK, Outcome.VIOLATED: EXIT_VIOLATED,
                 Outcome.INCONCLUSIVE: EXIT_INCONCLUSIVE}
_COND_EXIT = {CondVerdict.SATISFIED: EXIT_OK, CondVerdict.VIOLATED: EXIT_VIOLATED,
              CondVerdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}
_MEMBER_EXIT = {Verdict.MEMBER: EXIT_OK, Verdict.NON_MEMBER: EXIT_VIOLATED,
                Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE}


def _worst(codes: Sequence[int]) -> int:
    if EXIT_VIOLATED in codes:
        return EXIT_VIOLATED
    if EXIT_INCONCLUSIVE in codes:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# -- argument types ------------------------------------------------------------

def _range(text: str) -> tuple[int, int]:
    try:
        lo, _, hi = text.partition("..")
        lo_i, hi_i = int(lo), int(hi or lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 1..1000, got {text!r}")
    if lo_i > hi_i:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo_i, hi_i


def _corner(text: str) -> tuple[int, int]:
    parts = text.lower().replace(",", "x").split("x")
    try:
        r, c = (int(parts[0]), int(parts[-1]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RxC, got {text!r}")
    if r < 1 or c < 1:
        raise argparse.ArgumentTypeError("corner sizes must be >= 1")
    return r, c


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tol must be > 0")
    return v


def _window(text: str) -> int:
    v = int(text)
    if v < 2:
        raise argparse.ArgumentTypeError("window must be >= 2")
    return v


def _length(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("lengths must be >= 1")
    return v


# -- I/O -----------------------------------------------------------------------

def _emit(args, text: str) -> None:
    if args.out and args.out != "-":
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None


def _fmt_hint(path: str) -> str | None:
    return "csv" if path.lower().endswith(".csv") else None


def _sequence(args, default_len: int = 64) -> tuple[list[Fraction], str]:
    if args.file and args.seq:
        raise UsageError("give either --seq or --file, not both")
    if args.file:
        try:
            terms = serialize.load_sequence(_read(args.file), _fmt_hint(args.file))
        except (ValueError, ZeroDivisionError) as exc:
            raise DataError(f"{args.file}: {exc}") from None
        if not terms:
            raise DataError(f"{args.file}: no terms")
        if args.length is not None:
            if args.length > len(terms):
                raise DataError(f"--length {args.length} exceeds the {len(terms)} terms in {args.file}")
            terms = terms[:args.length]
        return terms, Path(args.file).stem
    if args.seq:
        try:
            return counterexample(args.seq, args.length or default_len), args.seq
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    raise UsageError("a sequence is required: --seq NAME or --file PATH")


_SPECS = {
    "fhat": lambda a: BandMatrixSpec.fhat(),
    "fhat_inverse": lambda a: BandMatrixSpec.fhat_inverse(),
    "delta": lambda a: BandMatrixSpec.delta(),
    "delta_forward": lambda a: BandMatrixSpec.delta_forward(),
    "brs": lambda a: BandMatrixSpec.brs(a.r, a.s),
    "brst": lambda a: BandMatrixSpec.brst(a.r, a.s, a.t),
}
MATRIX_KINDS = (*_SPECS, "identity", "zero")


def _spec(args) -> BandMatrixSpec:
    try:
        return _SPECS[args.matrix](args)
    except KeyError:
        raise UsageError(f"no band rule for matrix {args.matrix!r}") from None
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{args.matrix}: {exc}") from None


def _matrix(args) -> TruncatedMatrix:
    if args.file and args.matrix:
        raise UsageError("give either --matrix or --file, not both")
    if args.file:
        try:
            return serialize.load_matrix(_read(args.file), _fmt_hint(args.file))
        except (ValueError, ZeroDivisionError) as exc:
            raise DataError(f"{args.file}: {exc}") from None
    if not args.matrix:
        raise UsageError("a matrix is required: --matrix KIND or --file PATH")
    rows, cols = args.corner or (64, 64)
    if args.matrix == "identity":
        if rows != cols:
            raise UsageError("identity corner must be square")
        return TruncatedMatrix.identity(rows)
    if args.matrix == "zero":
        return TruncatedMatrix.zeros(rows, cols)
    return TruncatedMatrix.from_spec(_spec(args), rows, cols)


# -- commands ------------------------------------------------------------------

def _check(name: str, lo: int, hi: int) -> tuple[int, int, int | None]:
    if name == "cassini":
        ok = lambda n: fibcore.cassini(n) == (-1) ** (n + 1)
    elif name == "variant":
        ok = lambda n: fibcore.cassini_variant(n) == (-1) ** (n + 1)
    else:
        ok = lambda n: fibcore.fib_prefix_sum(n) == fibcore.fib(n + 2) - 1
    lo = max(lo, 1 if name != "prefix-sum" else 0)
    passed, first_bad = 0, None
    for n in range(lo, hi + 1):
        if ok(n):
            passed += 1
        elif first_bad is None:
            first_bad = n
    return passed, hi - lo + 1, first_bad


def cmd_fib(args) -> int:
    checks = [("cassini", args.check_cassini), ("variant", args.check_variant),
              ("prefix-sum", args.check_prefix_sum)]
    if args.check_all:
        checks = [(name, args.check_all) for name, _ in checks]
    checks = [(name, rng) for name, rng in checks if rng]
    if args.n is None and args.ratio is None and not checks:
        raise UsageError("fib needs N, --ratio N or a --check-* range")
    lines, code = [], EXIT_OK
    if args.n is not None:
        if args.n < 0:
            raise UsageError("N must be >= 0")
        lines.append(str(fibcore.fib(args.n)))
    if args.ratio is not None:
        if args.ratio < 0:
            raise UsageError("--ratio needs N >= 0")
        q = fibcore.fib_ratio(args.ratio)
        lines.append(f"{serialize.fmt_q(q)} ~ {serialize.decimal_str(q, args.decimal or 30)}")
    total_pass = total = 0
    for name, (lo, hi) in checks:
        passed, count, bad = _check(name, lo, hi)
        total_pass += passed
        total += count
        if len(checks) > 1:
            lines.append(f"{name}: {passed}/{count}")
        if bad is not None:
            lines.append(f"FAIL {name} first at n={bad}")
            code = EXIT_IDENTITY
    if checks:
        lines.append(f"{'OK' if total_pass == total else 'FAIL'} {total_pass}/{total}")
    _emit(args, "\n".join(lines) + "\n")
    return code


def cmd_transform(args) -> int:
    x, name = _sequence(args)
    spec = _spec(args) if args.matrix else BandMatrixSpec.fhat()
    if args.roundtrip:
        if spec.kind.value != "fhat":
            raise UsageError("--roundtrip applies to --matrix fhat")
        ok = roundtrip_check(x)
        _emit(args, f"roundtrip: {'exact' if ok else 'MISMATCH'}\n")
        return EXIT_OK if ok else EXIT_IDENTITY
    if args.inverse:
        y = apply_fhat_inverse(x) if spec.kind.value == "fhat" else None
        if y is None:
            raise UsageError("--inverse applies to --matrix fhat")
        label = "fhat_inverse"
    else:
        try:
            y = apply(spec, x)
        except ValueError as exc:
            raise DataError(str(exc)) from None
        label = spec.name or spec.kind.value
    if args.format == "csv":
        _emit(args, serialize.seq_to_csv(y, args.decimal))
    else:
        _emit(args, serialize.dumps(serialize.seq_to_dict(
            y, name=f"{label}({name})", decimal=args.decimal)))
    return EXIT_OK


_DOMAIN = (SpaceTag.C0_FHAT, SpaceTag.C_FHAT)


def cmd_classify(args) -> int:
    try:
        src, tgt = parse_space(args.source), parse_space(args.target)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    A = _matrix(args)
    try:
        if src in _DOMAIN:
            verdict = classify_domain_source(A, src, tgt, args.tol, args.window)
        elif tgt in _DOMAIN:
            verdict = classify_into_domain(A, src, tgt, args.tol, args.window)
        elif (src, tgt) in PAIR_TABLE:
            verdict = classify_pair(A, src, tgt, args.tol, args.window)
        else:
            raise UsageError(f"unsupported pair ({src.value}, {tgt.value})")
    except ValueError as exc:
        msg = str(exc)
        if "unsupported" in msg or "must be" in msg:
            raise UsageError(msg) from None
        raise DataError(msg) from None
    if args.format == "csv":
        _emit(args, serialize.verdict_to_csv(verdict))
    else:
        _emit(args, serialize.dumps(serialize.verdict_to_dict(verdict)))
    return _OUTCOME_EXIT[verdict.overall]


def cmd_condition(args) -> int:
    A = _matrix(args)
    try:
        rep = eval_condition(A, args.id, args.tol, args.window)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, serialize.dumps(serialize.condition_to_dict(rep)))
    return _COND_EXIT[rep.verdict]


def cmd_dual(args) -> int:
    a, _ = _sequence(args)
    ids = DUAL_SETS if args.set == "all" else (args.set,)
    try:
        reps = [dual_membership(a, s, args.tol, args.window) for s in ids]
    except ValueError as exc:
        raise DataError(str(exc)) from None
    if args.format == "csv":
        _emit(args, serialize.rows_to_csv(
            ["set", "verdict", "witness", "last_trace"],
            [[r.set_id, r.verdict.value, " ".join(map(str, r.witness or ())),
              r.trace[-1] if r.trace else ""] for r in reps]))
    else:
        _emit(args, serialize.dumps(
            {"reports": [serialize.condition_to_dict(r) for r in reps]}))
    return _worst([_COND_EXIT[r.verdict] for r in reps])


def cmd_basis(args) -> int:
    if args.reconstruct:
        return _reconstruct(args)
    if args.n is None:
        raise UsageError("basis needs --n N (N = -1 for the limit sequence) or --reconstruct")
    length = args.length or 16
    try:
        terms = basis_c_minus1(length) if args.n == -1 else basis_sequence(args.n, length)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "csv":
        _emit(args, serialize.seq_to_csv(terms, args.decimal))
    else:
        _emit(args, serialize.dumps(serialize.seq_to_dict(
            terms, name=f"c({args.n})", decimal=args.decimal)))
    return EXIT_OK


def _reconstruct(args) -> int:
    x, name = _sequence(args)
    tag = args.tag
    m = args.m if args.m is not None else len(x) // 2
    limit = serialize.parse_q(args.limit) if args.limit is not None else None
    try:
        bc = basis_coefficients(x, tag, limit, args.window)
        partial, residual = reconstruct(x, tag, m, limit, args.window)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    dropped = max((abs(a) for a in bc.coeffs[m + 1:]), default=Fraction(0))
    out = {
        "name": name,
        "space": parse_space(tag).value,
        "m": m,
        "coefficients": [serialize.fmt_q(q) for q in bc.coeffs],
        "residual_norm": serialize.fmt_q(residual),
        "dropped_coefficient_sup": serialize.fmt_q(dropped),
        "residual_matches_dropped_sup": residual == dropped,
    }
    if bc.l is not None:
        out["limit_coefficient"] = serialize.fmt_q(bc.l)
    if args.format == "csv":
        _emit(args, serialize.rows_to_csv(
            ["k", "coefficient", "partial"],
            [[k, c, p] for k, (c, p) in enumerate(zip(bc.coeffs, partial))]))
    else:
        _emit(args, serialize.dumps(out))
    return EXIT_OK if residual == dropped else EXIT_IDENTITY


def cmd_almost(args) -> int:
    x, name = _sequence(args, default_len=256)
    tol = args.tol if args.tol_given else ALMOST_TOL
    try:
        mv = f_lim_estimate(x, tol, null=args.null)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    out = {"name": name, "length": len(x), "tol": tol, **serialize.membership_to_dict(mv)}
    grid = None
    if args.grid:
        m_max = args.m_max if args.m_max is not None else min(16, (len(x) - 1) // 2)
        n_max = args.n_max if args.n_max is not None else min(16, len(x) - 1 - m_max)
        try:
            grid = t_matrix(x, m_max, n_max)
        except ValueError as exc:
            raise DataError(str(exc)) from None
        out["t"] = [[serialize.fmt_q(v) for v in row] for row in grid]
    if args.format == "csv":
        rows = ([[m, n, v] for m, row in enumerate(grid) for n, v in enumerate(row)]
                if grid else [[mv.space.value, mv.verdict.value, mv.limit_estimate]])
        header = ["m", "n", "t"] if grid else ["space", "verdict", "limit_estimate"]
        _emit(args, serialize.rows_to_csv(header, rows))
    else:
        _emit(args, serialize.dumps(out))
    return _MEMBER_EXIT[mv.verdict]


def cmd_member(args) -> int:
    x, name = _sequence(args)
    try:
        mv = membership_estimate(x, args.space, args.tol, args.window)
    except ValueError as exc:
        msg = str(exc)
        raise (DataError if "short" in msg else UsageError)(msg) from None
    out = {"name": name, "length": len(x), **serialize.membership_to_dict(mv)}
    if args.format == "csv":
        _emit(args, serialize.rows_to_csv(
            ["name", "space", "verdict", "limit_estimate", "exact_witness"],
            [[name, mv.space.value, mv.verdict.value, mv.limit_estimate,
              mv.exact_witness or ""]]))
    else:
        _emit(args, serialize.dumps(out))
    return _MEMBER_EXIT[mv.verdict]


# -- worked examples -----------------------------------------------------------

_FHAT = BandMatrixSpec.fhat()


def _unbounded_member(args) -> dict:
    N = args.length or 200
    x = counterexample("fib_squares", N)
    y = apply(_FHAT, x)
    inf = membership_estimate(x, SpaceTag.ELL_INF, args.tol, args.window)
    dom = membership_estimate(x, SpaceTag.C0_FHAT, args.tol, args.window)
    checks = {
        "transform_is_e0": y == [Fraction(int(k == 0)) for k in range(N)],
        "ell_inf_non_member": inf.verdict is Verdict.NON_MEMBER,
        "c0_fhat_member": dom.verdict is Verdict.MEMBER,
    }
    return {"sequence": "fib_squares", "length": N, "checks": checks,
            "ell_inf": serialize.membership_to_dict(inf),
            "c0_fhat": serialize.membership_to_dict(dom)}


def _strict_inclusion(args) -> dict:
    N = args.length or 101
    x = counterexample("ratio_sum", N)
    y = apply(_FHAT, x)
    phi = fibcore.golden_ratio(128)
    k = min(40, N - 1)
    cfh = membership_estimate(x, SpaceTag.C_FHAT, args.tol, args.window)
    c0fh = membership_estimate(x, SpaceTag.C0_FHAT, args.tol, args.window)
    checks = {
        "transform_is_fib_ratio": y == [fibcore.fib_ratio(k) for k in range(N)],
        "value_near_phi": abs(to_float(y[k]) - to_float(phi)) < 1e-15,
        "c_fhat_member": cfh.verdict is Verdict.MEMBER,
        "c0_fhat_non_member": c0fh.verdict is Verdict.NON_MEMBER,
    }
    return {"sequence": "ratio_sum", "length": N, "checks": checks,
            "value_at": k, "value": serialize.fmt_q(y[k]),
            "value_decimal_approx": serialize.decimal_str(y[k], 20),
            "c_fhat": serialize.membership_to_dict(cfh),
            "c0_fhat": serialize.membership_to_dict(c0fh)}


def _row_facts(args) -> dict:
    N = args.length or 200
    A = TruncatedMatrix.from_spec(_FHAT, N, N)
    abs_sums = [sum(abs(v) for v in row) for row in A.entries]
    best = max(abs_sums)
    at = abs_sums.index(best)
    sums = A.row_sums()
    start = min(50, N - 1)
    verdicts = {f"{s}->{t}": classify_pair(A, s, t, args.tol, args.window)
                for s, t in (("c0", "c0"), ("c", "c"), ("c", "c0"))}
    c4 = verdicts["c->c0"].reports[ConditionId.C4]
    checks = {
        "abs_row_sum_max_is_5/2": best == Fraction(5, 2) and at == 1,
        "row_sums_near_minus_one": all(abs(to_float(s + 1)) < 1e-10 for s in sums[start:]),
        "c0_c0_member": verdicts["c0->c0"].overall is Outcome.MEMBER,
        "c_c_member": verdicts["c->c"].overall is Outcome.MEMBER,
        "c_c0_violated_by_row_sums": (verdicts["c->c0"].overall is Outcome.VIOLATED
                                      and c4.verdict is CondVerdict.VIOLATED),
    }
    return {"corner": [N, N], "checks": checks,
            "abs_row_sum_max": serialize.fmt_q(best), "attained_at": at,
            "pairs": {k: v.overall.value for k, v in verdicts.items()},
            "row_sum_witness": list(c4.witness or ())}


def _non_solid(args) -> dict:
    N = args.length or 101
    u = counterexample("nonsolid_u", N)
    v = counterexample("nonsolid_v", N)
    uv = [a * b for a, b in zip(u, v)]
    y = apply(_FHAT, uv)
    F = fibcore.fib
    expect = [2 * (-1) ** (k + 1) * F(k) * F(k + 1) for k in range(1, N)]
    um = membership_estimate(u, SpaceTag.C0_FHAT, args.tol, args.window)
    uvm = membership_estimate(uv, SpaceTag.C0_FHAT, args.tol, args.window)
    checks = {
        "uv_transform_formula_k>=1": y[1:] == expect,
        "u_c0_fhat_member": um.verdict is Verdict.MEMBER,
        "v_bounded_by_one": all(abs(t) <= 1 for t in v),
        "uv_c0_fhat_non_member": uvm.verdict is Verdict.NON_MEMBER,
    }
    return {"length": N, "checks": checks,
            "uv_transform_at_0": serialize.fmt_q(y[0]),
            "uv_transform_head": [serialize.fmt_q(t) for t in y[:8]],
            "u_c0_fhat": serialize.membership_to_dict(um),
            "uv_c0_fhat": serialize.membership_to_dict(uvm)}


WITNESSES = {
    "unbounded-member": _unbounded_member,
    "strict-inclusion": _strict_inclusion,
    "row-facts": _row_facts,
    "non-solid": _non_solid,
}


def cmd_witness(args) -> int:
    out = {"witness": args.name, **WITNESSES[args.name](args)}
    ok = all(out["checks"].values())
    out["all_hold"] = ok
    if args.format == "csv":
        _emit(args, serialize.rows_to_csv(["check", "holds"], out["checks"].items()))
    else:
        _emit(args, serialize.dumps(out))
    return EXIT_OK if ok else EXIT_IDENTITY


# -- parser --------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class _TolAction(argparse.Action):
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        namespace.tol_given = True


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--length", "--len", dest="length", type=_length, metavar="N",
                   help="prefix length")
    g.add_argument("--corner", type=_corner, metavar="RxC", help="matrix corner size")
    g.add_argument("--tol", type=_positive_float, default=1e-8, action=_TolAction,
                   help="tolerance for tail tests (default 1e-8)")
    g.add_argument("--window", type=_window, default=8, help="tail window (default 8)")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    g.add_argument("--decimal", type=int, nargs="?", const=20, metavar="DIGITS",
                   help="add approximate decimal renderings")
    return p


def _source_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seq", metavar="NAME",
                   help="named sequence: " + ", ".join(SEQUENCE_NAMES))
    p.add_argument("--file", metavar="PATH", help="sequence file (JSON or CSV)")


def _band_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--r", type=Fraction, help="parameter r for brs/brst")
    p.add_argument("--s", type=Fraction, help="parameter s for brs/brst")
    p.add_argument("--t", type=Fraction, help="parameter t for brst")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="fibspaces",
                     description="Exact Fibonacci difference transforms and matrix-class evidence.")
    parser.set_defaults(tol_given=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fib", parents=[common], help="Fibonacci numbers and identity checks")
    p.add_argument("n", type=int, nargs="?", help="print f_n")
    p.add_argument("--ratio", type=int, metavar="N", help="f_{N+1}/f_N exactly and in decimal")
    p.add_argument("--check-cassini", type=_range, metavar="A..B")
    p.add_argument("--check-variant", type=_range, metavar="A..B")
    p.add_argument("--check-prefix-sum", type=_range, metavar="A..B")
    p.add_argument("--check-all", type=_range, metavar="A..B",
                   help="run all three identity checks on the range")
    p.set_defaults(func=cmd_fib)

    p = sub.add_parser("transform", parents=[common], help="apply a band matrix to a prefix")
    _source_args(p)
    p.add_argument("--matrix", choices=tuple(_SPECS), default="fhat")
    _band_args(p)
    p.add_argument("--inverse", action="store_true", help="apply the inverse of fhat")
    p.add_argument("--roundtrip", action="store_true",
                   help="check inverse(fhat(x)) == x exactly")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("classify", parents=[common], help="matrix-class evidence for a corner")
    p.add_argument("--matrix", choices=MATRIX_KINDS)
    p.add_argument("--file", metavar="PATH", help="matrix file (JSON or CSV)")
    _band_args(p)
    p.add_argument("--from", dest="source", required=True, metavar="SPACE")
    p.add_argument("--to", dest="target", required=True, metavar="SPACE")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("condition", parents=[common], help="evaluate one condition")
    p.add_argument("id", help="condition id, e.g. C1 or CDelta")
    p.add_argument("--matrix", choices=MATRIX_KINDS)
    p.add_argument("--file", metavar="PATH")
    _band_args(p)
    p.set_defaults(func=cmd_condition)

    p = sub.add_parser("dual", parents=[common], help="dual-set membership evidence")
    _source_args(p)
    p.add_argument("--set", choices=(*DUAL_SETS, "all"), default="all")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("basis", parents=[common], help="basis prefixes and reconstruction")
    p.add_argument("--n", type=int, help="basis index (-1 for the limit sequence)")
    p.add_argument("--reconstruct", action="store_true")
    _source_args(p)
    p.add_argument("--m", type=int, help="last basis index kept")
    p.add_argument("--tag", choices=("c0_fhat", "c_fhat"), default="c0_fhat")
    p.add_argument("--limit", help="limit coefficient for c_fhat (p/q)")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("almost", parents=[common],
                       help="almost-convergence evidence (default tol 1e-2)")
    _source_args(p)
    p.add_argument("--null", action="store_true", help="test almost convergence to 0")
    p.add_argument("--grid", action="store_true", help="include the t_mn grid")
    p.add_argument("--m-max", type=int)
    p.add_argument("--n-max", type=int)
    p.set_defaults(func=cmd_almost)

    p = sub.add_parser("member", parents=[common], help="sequence-space membership evidence")
    _source_args(p)
    p.add_argument("--space", required=True, choices=[t.value for t in SpaceTag])
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("witness", parents=[common], help="reproduce a worked example")
    p.add_argument("name", choices=tuple(WITNESSES))
    p.set_defaults(func=cmd_witness)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"fibspaces: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"fibspaces: bad input: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
