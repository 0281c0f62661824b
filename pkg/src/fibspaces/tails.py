"""Finite-prefix tests shared by the membership and condition evaluators.

All comparisons are exact: ``tol`` is converted with ``Fraction(tol)``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

GROWTH_FACTOR = Fraction(3, 2)


def to_float(q: Fraction) -> float:
    try:
        return float(q)
    except OverflowError:
        return float("inf") if q > 0 else float("-inf")


def spread(values: Sequence[Fraction]) -> Fraction:
    return max(values) - min(values) if values else Fraction(0)


def tail_spread(values: Sequence[Fraction], window: int) -> Fraction:
    """Largest pairwise gap among the last ``window`` values."""
    return spread(values[-window:])


def cauchy_tail(values: Sequence[Fraction], window: int, tol: float) -> bool:
    return tail_spread(values, window) < Fraction(tol)


def oscillation_persists(values: Sequence[Fraction], window: int) -> bool:
    """The last window oscillates at least as much as the one before it."""
    if len(values) < 2 * window:
        return False
    last = spread(values[-window:])
    prev = spread(values[-2 * window:-window])
    return last >= prev and last > 0


def geometric_growth(values: Sequence[Fraction], window: int) -> bool:
    """|v| increases strictly over the last window by >= 1.5 per step on average."""
    tail = [abs(v) for v in values[-window:]]
    if len(tail) < 2 or tail[0] == 0:
        return False
    if any(b <= a for a, b in zip(tail, tail[1:])):
        return False
    return tail[-1] >= tail[0] * GROWTH_FACTOR ** (len(tail) - 1)


def running_max(values: Sequence[Fraction]) -> list[Fraction]:
    out, best = [], None
    for v in values:
        best = v if best is None or v > best else best
        out.append(best)
    return out


def plateaued(values: Sequence[Fraction], window: int, tol: float = 0) -> bool:
    """The running max rose by no more than ``tol`` over the last ``window`` entries."""
    if len(values) <= window:
        return False
    rm = running_max(values)
    return rm[-1] - rm[-window - 1] <= Fraction(tol)


def sustained_growth(values: Sequence[Fraction], window: int,
                     span: int | None = None) -> bool:
    """Running max rises at every step of the last window, each step being at
    least half the average step over the whole history.

    ``span`` is the number of steps the final value accumulated over from a
    zero baseline; by default the history is ``values`` itself.
    """
    if len(values) <= window:
        return False
    rm = running_max(values)
    tail = rm[-window - 1:]
    inc = [b - a for a, b in zip(tail, tail[1:])]
    if any(d <= 0 for d in inc):
        return False
    if span is None:
        avg = (rm[-1] - rm[0]) / (len(rm) - 1)
    else:
        avg = rm[-1] / span
    return 2 * min(inc) >= avg


def unbounded_trend(values: Sequence[Fraction], window: int,
                    span: int | None = None) -> bool:
    """Running max shows sustained linear or geometric growth."""
    if sustained_growth(values, window, span):
        return True
    return geometric_growth(running_max(values), window)


def constant_from(values: Sequence[Fraction]) -> int:
    """Smallest i with values[i:] all equal."""
    i = len(values) - 1
    while i > 0 and values[i - 1] == values[-1]:
        i -= 1
    return i
