"""
Sequence-space semantics at finite truncation.

Membership in spaces of infinite sequences cannot be decided from a prefix.
The functions here return *evidence*: a :class:`MembershipVerdict` whose
``exact_witness`` is set only when an exact identity on the prefix (not a
tail heuristic) drives the verdict.

Defaults are ``tol = 1e-8`` and ``window = 8``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import accumulate
from typing import Sequence

from . import tails
from .bandops import (
    BandMatrixSpec,
    Prefix,
    apply,
    apply_fhat_inverse,
    as_prefix,
)
from .fibcore import DEFAULT_CACHE as _F

__all__ = [
    "SpaceTag",
    "Verdict",
    "MembershipVerdict",
    "BasisCoefficients",
    "fhat_norm",
    "membership_estimate",
    "basis_sequence",
    "basis_c_minus1",
    "basis_coefficients",
    "reconstruct",
    "counterexample",
    "SEQUENCE_NAMES",
    "t_matrix",
    "f_lim_estimate",
    "parse_space",
]

TOL = 1e-8
WINDOW = 8
_FHAT = BandMatrixSpec.fhat()


class SpaceTag(str, Enum):
    ELL_INF = "ell_inf"
    C = "c"
    C0 = "c0"
    ELL_1 = "ell_1"
    BS = "bs"
    CS = "cs"
    CS0 = "cs0"
    BV1 = "bv1"
    F = "f"
    F0 = "f0"
    FS = "fs"
    C0_FHAT = "c0_fhat"
    C_FHAT = "c_fhat"


_ALIASES = {"l_inf": "ell_inf", "linf": "ell_inf", "ell1": "ell_1",
            "l1": "ell_1", "l_1": "ell_1"}


def parse_space(name: str | SpaceTag) -> SpaceTag:
    if isinstance(name, SpaceTag):
        return name
    key = name.strip().lower()
    return SpaceTag(_ALIASES.get(key, key))


class Verdict(str, Enum):
    MEMBER = "member-evidence"
    NON_MEMBER = "non-member-evidence"
    INCONCLUSIVE = "inconclusive"


@dataclass
class MembershipVerdict:
    space: SpaceTag
    verdict: Verdict
    limit_estimate: float | None
    tail_oscillation: float
    exact_witness: str | None = None
    note: str = ""

    def __post_init__(self) -> None:
        if self.exact_witness and self.verdict is Verdict.INCONCLUSIVE:
            raise ValueError("an exact witness must decide the verdict")

    @property
    def is_member(self) -> bool:
        return self.verdict is Verdict.MEMBER


@dataclass
class BasisCoefficients:
    """Expansion coefficients in the basis c^(n) (and c^(-1) when ``l`` is set)."""

    coeffs: list[Fraction]
    l: Fraction | None = None


def _checked(x: Sequence, minimum: int = 1) -> Prefix:
    x = as_prefix(x)
    if len(x) < max(1, minimum):
        raise ValueError(f"prefix of length {len(x)} is too short (need {max(1, minimum)})")
    return x


def fhat_norm(x: Sequence) -> Fraction:
    """max_n |(fhat x)_n| over the prefix.

    This is a lower bound for the true sup norm of the whole sequence.
    """
    return max(abs(v) for v in apply(_FHAT, _checked(x)))


# -- membership criteria -------------------------------------------------------

def _unit_index(y: Sequence[Fraction]) -> int | None:
    nz = [i for i, v in enumerate(y) if v]
    if len(nz) == 1 and y[nz[0]] == 1:
        return nz[0]
    return None


def _constant_witness(y: Prefix, window: int, label: str) -> tuple[str, Fraction] | None:
    start = tails.constant_from(y)
    if len(y) - start < max(window, len(y) // 2):
        return None
    value = y[-1]
    j = _unit_index(y)
    if j is not None:
        return f"{label} equals e^({j}) on the prefix", value
    return f"{label} is exactly {value} from index {start} to the end of the prefix", value


def _bounded(space, y, tol, window) -> MembershipVerdict:
    osc = tails.to_float(tails.tail_spread(y, window))
    absy = [abs(v) for v in y]
    if tails.geometric_growth(absy, window):
        return MembershipVerdict(space, Verdict.NON_MEMBER, None, osc,
                                 note="terms grow by >= 1.5x per step over the final window")
    if tails.plateaued(absy, window, tol):
        return MembershipVerdict(space, Verdict.MEMBER, None, osc,
                                 note=f"sup |x_k| = {max(absy)} settled over the final window")
    return MembershipVerdict(space, Verdict.INCONCLUSIVE, None, osc)


def _convergent(space, y, tol, window, null=False, label="sequence") -> MembershipVerdict:
    tol_q = Fraction(tol)
    gap = tails.tail_spread(y, window)
    osc = tails.to_float(gap)
    limit = tails.to_float(y[-1])
    wit = _constant_witness(y, window, label)
    if wit is not None:
        text, value = wit
        if null and value != 0:
            return MembershipVerdict(space, Verdict.NON_MEMBER, limit, osc, text,
                                     note="constant tail is not zero")
        return MembershipVerdict(space, Verdict.MEMBER, limit, osc, text)
    if gap < tol_q:
        if null and abs(y[-1]) >= tol_q:
            return MembershipVerdict(space, Verdict.NON_MEMBER, limit, osc,
                                     note="tail settles away from zero")
        return MembershipVerdict(space, Verdict.MEMBER, limit, osc)
    if tails.oscillation_persists(y, window):
        return MembershipVerdict(space, Verdict.NON_MEMBER, None, osc,
                                 note="tail oscillation is not shrinking")
    return MembershipVerdict(space, Verdict.INCONCLUSIVE, None, osc)


def _partial_sums(y: Prefix) -> Prefix:
    return list(accumulate(y))


def membership_estimate(
    x: Sequence, tag: SpaceTag | str, tol: float = TOL, window: int = WINDOW
) -> MembershipVerdict:
    """Heuristic membership of a prefix in the space named by ``tag``.

    c0_fhat and c_fhat transform by fhat first and then test c0 / c. Series
    spaces (bs, cs, cs0) test the partial sums, ell_1 the partial sums of
    |x_k|, bv1 the backward differences under the ell_1 rule, and f/f0/fs go
    through :func:`f_lim_estimate`.
    """
    tag = parse_space(tag)
    if window < 2:
        raise ValueError("window must be >= 2")
    x = _checked(x, 2 * window)
    if tag is SpaceTag.C0_FHAT or tag is SpaceTag.C_FHAT:
        y = apply(_FHAT, x)
        v = _convergent(tag, y, tol, window, null=tag is SpaceTag.C0_FHAT,
                        label="transform")
        return v
    if tag is SpaceTag.ELL_INF:
        return _bounded(tag, x, tol, window)
    if tag is SpaceTag.C:
        return _convergent(tag, x, tol, window)
    if tag is SpaceTag.C0:
        return _convergent(tag, x, tol, window, null=True)
    if tag is SpaceTag.ELL_1:
        return _convergent(tag, _partial_sums([abs(v) for v in x]), tol, window,
                           label="absolute partial sum")
    if tag is SpaceTag.BS:
        return _bounded(tag, _partial_sums(x), tol, window)
    if tag is SpaceTag.CS:
        return _convergent(tag, _partial_sums(x), tol, window, label="partial sum")
    if tag is SpaceTag.CS0:
        return _convergent(tag, _partial_sums(x), tol, window, null=True,
                           label="partial sum")
    if tag is SpaceTag.BV1:
        diffs = [x[0]] + [b - a for a, b in zip(x, x[1:])]
        return _convergent(tag, _partial_sums([abs(v) for v in diffs]), tol,
                           window, label="variation")
    if tag is SpaceTag.F:
        return f_lim_estimate(x, tol)
    if tag is SpaceTag.F0:
        return f_lim_estimate(x, tol, null=True)
    if tag is SpaceTag.FS:
        v = f_lim_estimate(_partial_sums(x), tol)
        v.space = SpaceTag.FS
        return v
    raise ValueError(f"unsupported space {tag}")  # pragma: no cover


# -- bases ---------------------------------------------------------------------

def basis_sequence(n: int, length: int) -> Prefix:
    """Prefix of c^(n): zeros before n, then f_{k+1}^2 / (f_n f_{n+1})."""
    if n < 0:
        raise ValueError("n must be >= 0 (use basis_c_minus1 for c^(-1))")
    if length <= n:
        raise ValueError(f"length {length} does not reach index {n}")
    den = _F[n] * _F[n + 1]
    return [Fraction(0) if k < n else Fraction(_F[k + 1] ** 2, den)
            for k in range(length)]


def basis_c_minus1(length: int) -> Prefix:
    """Prefix of c^(-1), c_k = sum_{j<=k} f_{k+1}^2 / (f_j f_{j+1})."""
    if length < 1:
        raise ValueError("length must be >= 1")
    out, acc = [], Fraction(0)
    for k in range(length):
        acc += Fraction(1, _F[k] * _F[k + 1])
        out.append(acc * _F[k + 1] ** 2)
    return out


def basis_coefficients(
    x: Sequence, tag: SpaceTag | str = SpaceTag.C0_FHAT,
    limit=None, window: int = WINDOW,
) -> BasisCoefficients:
    """Coefficients of ``x`` in the basis of c0_fhat or c_fhat.

    For c_fhat the limit coefficient is ``limit`` when given, else the mean
    of the transform over the last ``window`` terms (a heuristic: the true
    limit is not visible in a prefix).
    """
    tag = parse_space(tag)
    y = apply(_FHAT, _checked(x))
    if tag is SpaceTag.C0_FHAT:
        return BasisCoefficients(y)
    if tag is not SpaceTag.C_FHAT:
        raise ValueError("basis expansions exist for c0_fhat and c_fhat only")
    if limit is None:
        tail = y[-window:]
        l = sum(tail, Fraction(0)) / len(tail)
    else:
        l = Fraction(limit)
    return BasisCoefficients([v - l for v in y], l)


def reconstruct(
    x: Sequence, tag: SpaceTag | str, m: int, limit=None, window: int = WINDOW,
) -> tuple[Prefix, Fraction]:
    """Partial basis expansion through index ``m`` and the fhat-norm of the residual.

    The expansion is summed term by term from the basis sequences; the
    residual norm is measured by transforming ``x - partial``.
    """
    x = _checked(x)
    N = len(x)
    if not 0 <= m < N:
        raise ValueError(f"m={m} outside 0..{N - 1}")
    bc = basis_coefficients(x, tag, limit, window)
    partial = [Fraction(0)] * N
    if bc.l is not None and bc.l:
        partial = [bc.l * v for v in basis_c_minus1(N)]
    for n in range(m + 1):
        a = bc.coeffs[n]
        if not a:
            continue
        den = _F[n] * _F[n + 1]
        for k in range(n, N):
            partial[k] += a * Fraction(_F[k + 1] ** 2, den)
    residual = [a - b for a, b in zip(x, partial)]
    return partial, fhat_norm(residual)


# -- named sequences -----------------------------------------------------------

def _ratio_sum(length: int) -> Prefix:
    out, acc = [], Fraction(0)
    for k in range(length):
        acc += Fraction(1, _F[k] ** 2)
        out.append(acc * _F[k + 1] ** 2)
    return out


def _sign(k: int) -> int:
    return 1 if k % 2 == 0 else -1


_GENERATORS = {
    "fib_squares": lambda k: Fraction(_F[k + 1] ** 2),
    "nonsolid_u": lambda k: Fraction(_F[k + 1] ** 2),
    "nonsolid_v": lambda k: Fraction(-_sign(k)),
    "nonsolid_uv": lambda k: Fraction(-_sign(k) * _F[k + 1] ** 2),
    "ones": lambda k: Fraction(1),
    "zero": lambda k: Fraction(0),
    "alternating": lambda k: Fraction(_sign(k)),
    "staircase": lambda k: Fraction(k % 2),
    "geometric": lambda k: Fraction(1, 2 ** k),
}

SEQUENCE_NAMES = (
    "fib_squares", "ratio_sum", "nonsolid_u", "nonsolid_v", "nonsolid_uv",
    "ones", "zero", "alternating", "staircase", "geometric", "unit<n>",
)


def counterexample(name: str, length: int, n: int | None = None) -> Prefix:
    """Exact prefix of a named sequence.

    ``fib_squares`` (= ``nonsolid_u``) is f_{k+1}^2, ``ratio_sum`` is
    sum_{j<=k} f_{k+1}^2 / f_j^2, ``nonsolid_v`` is (-1)^(k+1) and
    ``nonsolid_uv`` their product. ``unit3`` (or ``name="unit", n=3``) is
    e^(3); ``alternating`` is (-1)^k, ``staircase`` is 0, 1, 0, 1, ... and
    ``geometric`` is 2^-k.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    key = name.strip().lower()
    if key.startswith("unit"):
        rest = key[4:].strip("()_ ")
        if rest:
            n = int(rest)
        if n is None or n < 0:
            raise ValueError("unit sequence needs an index n >= 0")
        return [Fraction(int(k == n)) for k in range(length)]
    if key == "ratio_sum":
        return _ratio_sum(length)
    try:
        gen = _GENERATORS[key]
    except KeyError:
        raise ValueError(f"unknown sequence {name!r}") from None
    return [gen(k) for k in range(length)]


# -- almost convergence --------------------------------------------------------

def _prefix_sums(x: Prefix) -> list[Fraction]:
    return [Fraction(0)] + list(accumulate(x))


def t_matrix(x: Sequence, m_max: int, n_max: int) -> list[list[Fraction]]:
    """grid[m][n] = (x_n + ... + x_{n+m}) / (m + 1) for m <= m_max, n <= n_max."""
    x = _checked(x)
    if m_max < 0 or n_max < 0:
        raise ValueError("m_max and n_max must be >= 0")
    if m_max + n_max > len(x) - 1:
        raise ValueError(
            f"m_max + n_max = {m_max + n_max} needs a prefix longer than {len(x)}"
        )
    S = _prefix_sums(x)
    return [[(S[n + m + 1] - S[n]) / (m + 1) for n in range(n_max + 1)]
            for m in range(m_max + 1)]


def _t_row(S: list[Fraction], m: int, n_max: int) -> list[Fraction]:
    return [(S[n + m + 1] - S[n]) / (m + 1) for n in range(n_max + 1)]


def f_lim_estimate(x: Sequence, tol: float = TOL, null: bool = False) -> MembershipVerdict:
    """Almost-convergence evidence from the averages t_mn over the whole prefix.

    With M = (N-1)//2, every start n in 0..N-1-M is used. Member evidence
    when both max_n |t_{M,n} - t_{M-1,n}| and the spread of t_{M,.} over n
    are below ``tol``; the limit estimate is t_{M,0}. When the spread at M
    has not shrunk from the spread at M//2 the averages are not settling and
    the verdict is non-member evidence.
    """
    x = _checked(x, 16)
    space = SpaceTag.F0 if null else SpaceTag.F
    N = len(x)
    if tails.geometric_growth(x, WINDOW):
        return MembershipVerdict(space, Verdict.NON_MEMBER, None, float("inf"),
                                 note="unbounded growth; almost convergent sequences are bounded")
    M = (N - 1) // 2
    n_max = N - 1 - M
    S = _prefix_sums(x)
    top = _t_row(S, M, n_max)
    below = _t_row(S, M - 1, n_max)
    step = max(abs(a - b) for a, b in zip(top, below))
    width = tails.spread(top)
    half = tails.spread(_t_row(S, M // 2, n_max))
    tol_q = Fraction(tol)
    osc = tails.to_float(max(step, width))
    limit = top[0]
    if step < tol_q and width < tol_q:
        if null and abs(limit) >= tol_q:
            return MembershipVerdict(space, Verdict.NON_MEMBER, tails.to_float(limit), osc,
                                     note="averages settle away from zero")
        return MembershipVerdict(space, Verdict.MEMBER, tails.to_float(limit), osc,
                                 note=f"uniform over n = 0..{n_max} at m = {M}")
    if width > 0 and width >= half:
        return MembershipVerdict(space, Verdict.NON_MEMBER, None, osc,
                                 note="spread over n is not shrinking with m")
    return MembershipVerdict(space, Verdict.INCONCLUSIVE, tails.to_float(limit), osc)
