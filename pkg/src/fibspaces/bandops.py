"""
Band and triangle matrices over exact rationals.

A :class:`BandMatrixSpec` describes an infinite lower-triangular (or banded)
matrix by an entry rule; a :class:`TruncatedMatrix` is a dense finite corner
of one. Sequences are plain lists of :class:`~fractions.Fraction` holding
the first N terms x_0..x_{N-1} of an infinite sequence.

The Fibonacci difference matrix has entries

    fhat[n, n-1] = -f_{n+1}/f_n,   fhat[n, n] = f_n/f_{n+1}

with row 0 equal to (1, 0, 0, ...), so that (fhat x)_0 = x_0. Its inverse is
the full lower triangle g[n, k] = f_{n+1}^2 / (f_k f_{k+1}).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Sequence

from .fibcore import DEFAULT_CACHE as _F

__all__ = [
    "Kind",
    "BandMatrixSpec",
    "TruncatedMatrix",
    "as_prefix",
    "entry",
    "apply",
    "apply_fhat_inverse",
    "roundtrip_check",
    "build_B_from_A",
    "build_Dm_from_A",
    "build_D_from_A",
    "build_C_from_a",
    "build_scaled_inverse",
    "inverse_weight",
]

Prefix = list[Fraction]


class Kind(str, Enum):
    DELTA = "delta"
    DELTA_FORWARD = "delta_forward"
    BRS = "brs"
    BRST = "brst"
    FHAT = "fhat"
    FHAT_INVERSE = "fhat_inverse"
    CUSTOM = "custom"


def _q(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational, str)):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)
    raise TypeError(f"cannot convert {type(v).__name__} to Fraction")


def as_prefix(terms: Iterable) -> Prefix:
    """Coerce ints, strings like ``"3/4"`` and rationals into a Fraction list."""
    return [_q(t) for t in terms]


def inverse_weight(j: int, k: int) -> Fraction:
    """f_{j+1}^2 / (f_k f_{k+1}), the (j, k) entry of the inverse for k <= j."""
    return Fraction(_F[j + 1] ** 2, _F[k] * _F[k + 1])


@dataclass(frozen=True)
class BandMatrixSpec:
    """Entry rule for an infinite matrix supported on a band.

    ``lower`` counts sub-diagonals (``None`` means the full lower triangle),
    ``upper`` counts super-diagonals. Entries outside the band are zero no
    matter what a custom generator returns.
    """

    kind: Kind
    params: tuple[Fraction, ...] = ()
    lower: int | None = 0
    upper: int = 0
    generator: Callable[[int, int], Fraction] | None = field(
        default=None, compare=False, repr=False
    )
    name: str = ""

    @classmethod
    def fhat(cls) -> BandMatrixSpec:
        return cls(Kind.FHAT, lower=1, name="fhat")

    @classmethod
    def fhat_inverse(cls) -> BandMatrixSpec:
        return cls(Kind.FHAT_INVERSE, lower=None, name="fhat_inverse")

    @classmethod
    def delta(cls) -> BandMatrixSpec:
        return cls(Kind.DELTA, lower=1, name="delta")

    @classmethod
    def delta_forward(cls) -> BandMatrixSpec:
        return cls(Kind.DELTA_FORWARD, lower=0, upper=1, name="delta_forward")

    @classmethod
    def brs(cls, r, s) -> BandMatrixSpec:
        r, s = _q(r), _q(s)
        if r == 0 or s == 0:
            raise ValueError("B(r,s) needs nonzero r and s")
        return cls(Kind.BRS, (r, s), lower=1, name="brs")

    @classmethod
    def brst(cls, r, s, t) -> BandMatrixSpec:
        r, s, t = _q(r), _q(s), _q(t)
        if r == 0 or s == 0 or t == 0:
            raise ValueError("B(r,s,t) needs nonzero r, s and t")
        return cls(Kind.BRST, (r, s, t), lower=2, name="brst")

    @classmethod
    def custom(
        cls,
        generator: Callable[[int, int], object],
        lower: int | None = None,
        upper: int = 0,
        name: str = "custom",
    ) -> BandMatrixSpec:
        """Wrap ``generator(n, k)``; the support shape must be declared."""
        if upper < 0 or (lower is not None and lower < 0):
            raise ValueError("bandwidths must be non-negative")
        return cls(
            Kind.CUSTOM,
            lower=lower,
            upper=upper,
            generator=lambda n, k: _q(generator(n, k)),
            name=name,
        )

    def in_band(self, n: int, k: int) -> bool:
        if k > n + self.upper:
            return False
        if self.lower is None:
            return True
        return k >= n - self.lower

    def entry(self, n: int, k: int) -> Fraction:
        if n < 0 or k < 0:
            raise IndexError(f"negative index ({n}, {k})")
        if not self.in_band(n, k):
            return Fraction(0)
        kind = self.kind
        if kind is Kind.FHAT:
            if n == 0:
                return Fraction(1)
            if k == n:
                return Fraction(_F[n], _F[n + 1])
            return Fraction(-_F[n + 1], _F[n])
        if kind is Kind.FHAT_INVERSE:
            return inverse_weight(n, k)
        if kind is Kind.DELTA:
            return Fraction(1) if k == n else Fraction(-1)
        if kind is Kind.DELTA_FORWARD:
            return Fraction(1) if k == n else Fraction(-1)
        if kind is Kind.BRS:
            r, s = self.params
            return r if k == n else s
        if kind is Kind.BRST:
            r, s, t = self.params
            return (r, s, t)[n - k]
        assert self.generator is not None
        return self.generator(n, k)


def entry(spec: BandMatrixSpec, n: int, k: int) -> Fraction:
    return spec.entry(n, k)


@dataclass
class TruncatedMatrix:
    """Dense ``rows x cols`` corner of an infinite matrix.

    ``row_closed`` records that every row is zero beyond the last stored
    column, so row series over k are finite and exact. Corners of lower
    triangles with ``cols >= rows`` have this property.
    """

    rows: int
    cols: int
    entries: list[list[Fraction]]
    provenance: str = ""
    row_closed: bool = False

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(
            len(r) != self.cols for r in self.entries
        ):
            raise ValueError(
                f"entries do not form a {self.rows}x{self.cols} grid"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], provenance: str = "rows",
                  row_closed: bool = False) -> TruncatedMatrix:
        grid = [as_prefix(r) for r in rows]
        ncols = len(grid[0]) if grid else 0
        return cls(len(grid), ncols, grid, provenance, row_closed)

    @classmethod
    def from_spec(cls, spec: BandMatrixSpec, rows: int,
                  cols: int | None = None) -> TruncatedMatrix:
        cols = rows if cols is None else cols
        grid = [[spec.entry(n, k) for k in range(cols)] for n in range(rows)]
        closed = rows - 1 + spec.upper <= cols - 1
        return cls(rows, cols, grid, f"spec:{spec.name or spec.kind.value}",
                   closed)

    @classmethod
    def identity(cls, n: int) -> TruncatedMatrix:
        grid = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        return cls(n, n, grid, "identity", True)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> TruncatedMatrix:
        cols = rows if cols is None else cols
        grid = [[Fraction(0)] * cols for _ in range(rows)]
        return cls(rows, cols, grid, "zero", True)

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        n, k = idx
        return self.entries[n][k]

    def row(self, n: int) -> Prefix:
        return list(self.entries[n])

    def column(self, k: int) -> Prefix:
        return [r[k] for r in self.entries]

    def row_sums(self) -> Prefix:
        return [sum(r, Fraction(0)) for r in self.entries]

    def matvec(self, x: Sequence[Fraction]) -> Prefix:
        if len(x) < self.cols:
            raise ValueError(f"vector of length {len(x)} for {self.cols} columns")
        return [
            sum((a * xk for a, xk in zip(r, x) if a), Fraction(0))
            for r in self.entries
        ]

    def matmul(self, other: TruncatedMatrix) -> TruncatedMatrix:
        if self.cols != other.rows:
            raise ValueError("inner dimensions differ")
        out = []
        for r in self.entries:
            acc = [Fraction(0)] * other.cols
            for j, a in enumerate(r):
                if not a:
                    continue
                orow = other.entries[j]
                for k in range(other.cols):
                    b = orow[k]
                    if b:
                        acc[k] += a * b
            out.append(acc)
        return TruncatedMatrix(
            self.rows, other.cols, out,
            f"product({self.provenance},{other.provenance})",
            self.row_closed and other.row_closed,
        )

    def map_rows(self, fn: Callable[[int, list[Fraction]], list[Fraction]],
                 provenance: str) -> TruncatedMatrix:
        grid = [fn(n, list(r)) for n, r in enumerate(self.entries)]
        return TruncatedMatrix(self.rows, self.cols, grid, provenance,
                               self.row_closed)


def _nonempty(x: Sequence, what: str = "prefix") -> Prefix:
    x = as_prefix(x)
    if not x:
        raise ValueError(f"empty {what}")
    return x


def apply(spec: BandMatrixSpec, x: Sequence) -> Prefix:
    """Transform a prefix; the output has every term the prefix determines.

    Row n needs x_k for k up to n + upper, so the output length is
    ``len(x) - spec.upper``.
    """
    x = _nonempty(x)
    N = len(x)
    M = N - spec.upper
    if M < 1:
        raise ValueError("prefix too short for the matrix band")
    if spec.kind is Kind.FHAT:
        out = [x[0]]
        for n in range(1, M):
            fn, fn1 = _F[n], _F[n + 1]
            out.append(Fraction(fn, fn1) * x[n] - Fraction(fn1, fn) * x[n - 1])
        return out
    if spec.kind is Kind.FHAT_INVERSE:
        return apply_fhat_inverse(x)
    out = []
    for n in range(M):
        lo = 0 if spec.lower is None else max(0, n - spec.lower)
        hi = min(n + spec.upper, N - 1)
        out.append(sum((spec.entry(n, k) * x[k] for k in range(lo, hi + 1)),
                       Fraction(0)))
    return out


def apply_fhat_inverse(y: Sequence) -> Prefix:
    """x_k = sum_{j<=k} f_{k+1}^2 / (f_j f_{j+1}) * y_j, in linear time."""
    y = _nonempty(y)
    out = []
    acc = Fraction(0)
    for k, yk in enumerate(y):
        acc += yk / (_F[k] * _F[k + 1])
        out.append(acc * _F[k + 1] ** 2)
    return out


def roundtrip_check(x: Sequence) -> bool:
    """True when inverse(fhat(x)) reproduces x term by term."""
    x = as_prefix(x)
    if not x:
        return True
    return apply_fhat_inverse(apply(BandMatrixSpec.fhat(), x)) == x


def build_B_from_A(A: TruncatedMatrix) -> TruncatedMatrix:
    """Rows of fhat applied to A: b_nk = -(f_{n+1}/f_n) a_{n-1,k} + (f_n/f_{n+1}) a_nk.

    Row 0 has no predecessor and is copied (f_0/f_1 = 1).
    """
    if A.rows < 1:
        raise ValueError("A has no rows")
    grid = [list(A.entries[0])]
    for n in range(1, A.rows):
        up = Fraction(-_F[n + 1], _F[n])
        dn = Fraction(_F[n], _F[n + 1])
        prev, cur = A.entries[n - 1], A.entries[n]
        grid.append([up * p + dn * c for p, c in zip(prev, cur)])
    return TruncatedMatrix(A.rows, A.cols, grid, f"B({A.provenance})",
                           A.row_closed)


def _weighted_prefix(row: Sequence[Fraction]) -> list[Fraction]:
    """W[j] = sum_{i<=j} f_{i+1}^2 row[i]."""
    out, acc = [], Fraction(0)
    for j, a in enumerate(row):
        if a:
            acc += a * _F[j + 1] ** 2
        out.append(acc)
    return out


def build_Dm_from_A(A: TruncatedMatrix, m: int) -> TruncatedMatrix:
    """d^(m)_nk = sum_{j=k}^{m} f_{j+1}^2/(f_k f_{k+1}) a_nj for k <= m, else 0."""
    if not 0 <= m < A.cols:
        raise ValueError(f"m={m} outside 0..{A.cols - 1}")
    grid = []
    for r in A.entries:
        W = _weighted_prefix(r[: m + 1])
        total = W[m]
        row = []
        for k in range(A.cols):
            if k > m:
                row.append(Fraction(0))
            else:
                below = W[k - 1] if k else Fraction(0)
                row.append((total - below) / (_F[k] * _F[k + 1]))
        grid.append(row)
    return TruncatedMatrix(A.rows, A.cols, grid, f"D^({m})({A.provenance})",
                           True)


def build_D_from_A(
    A: TruncatedMatrix, tol: float = 1e-8, window: int = 8
) -> tuple[TruncatedMatrix, list[list[bool]]]:
    """Partial sums of d_nk = sum_{j>=k} f_{j+1}^2/(f_k f_{k+1}) a_nj over the corner.

    The second value flags each entry: True when the last ``window`` partial
    sums differ by less than ``tol`` (or the row is closed, making the sum
    finite), False when the truncation cannot decide.
    """
    if not 2 <= window <= A.cols:
        raise ValueError(f"window must lie in 2..{A.cols}")
    tol_q = Fraction(tol)
    grid, flags = [], []
    for r in A.entries:
        W = _weighted_prefix(r)
        total = W[-1]
        tail = W[-window:]
        spread = max(tail) - min(tail)
        row, frow = [], []
        for k in range(A.cols):
            below = W[k - 1] if k else Fraction(0)
            scale = _F[k] * _F[k + 1]
            row.append((total - below) / scale)
            if A.row_closed:
                frow.append(True)
            elif k > A.cols - window:
                # fewer than `window` partial sums exist for this entry
                frow.append(False)
            else:
                frow.append(spread / scale < tol_q)
        grid.append(row)
        flags.append(frow)
    D = TruncatedMatrix(A.rows, A.cols, grid, f"D({A.provenance})",
                        A.row_closed)
    return D, flags


def build_C_from_a(a: Sequence) -> TruncatedMatrix:
    """c_nk = sum_{j=k}^{n} a_j f_{j+1}^2/(f_k f_{k+1}) for k <= n."""
    a = as_prefix(a)
    N = len(a)
    S = _weighted_prefix(a)
    grid = []
    for n in range(N):
        row = []
        for k in range(N):
            if k > n:
                row.append(Fraction(0))
            else:
                below = S[k - 1] if k else Fraction(0)
                row.append((S[n] - below) / (_F[k] * _F[k + 1]))
        grid.append(row)
    return TruncatedMatrix(N, N, grid, "C(a)", True)


def build_scaled_inverse(a: Sequence) -> TruncatedMatrix:
    """Row n of the inverse scaled by a_n: b_nk = a_n f_{n+1}^2/(f_k f_{k+1}), k <= n."""
    a = as_prefix(a)
    N = len(a)
    grid = [
        [a[n] * inverse_weight(n, k) if k <= n else Fraction(0)
         for k in range(N)]
        for n in range(N)
    ]
    return TruncatedMatrix(N, N, grid, "a*inverse", True)
