"""
Exact Fibonacci arithmetic.

Indexing throughout the package is f_0 = f_1 = 1, f_n = f_{n-1} + f_{n-2}
(so f_2 = 2, f_3 = 3, f_4 = 5, ...). Every matrix entry elsewhere is built
from these integers, so the convention must not be changed.

Rationals are :class:`fractions.Fraction`; floats only appear when comparing
against the golden ratio.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import isqrt

__all__ = [
    "FibCache",
    "fib",
    "fib_ratio",
    "cassini",
    "cassini_variant",
    "fib_prefix_sum",
    "reciprocal_fib_partial",
    "golden_ratio",
    "DEFAULT_CACHE",
]


class FibCache:
    """Growable table of Fibonacci numbers with f_0 = f_1 = 1.

    Extension is guarded by a lock; reads of already-computed indices are
    lock-free, so a cache warmed with :meth:`warm` can be shared freely.
    """

    def __init__(self) -> None:
        self._values: list[int] = [1, 1]
        self._lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._values)

    def warm(self, n: int) -> None:
        """Ensure indices ``0..n`` are available."""
        if n < len(self._values):
            return
        with self._lock:
            vals = self._values
            a, b = vals[-2], vals[-1]
            extra = []
            for _ in range(len(vals), n + 1):
                a, b = b, a + b
                extra.append(b)
            vals.extend(extra)

    def __getitem__(self, n: int) -> int:
        if n < 0:
            raise IndexError(f"Fibonacci index must be >= 0, got {n}")
        if n >= len(self._values):
            self.warm(n)
        return self._values[n]


DEFAULT_CACHE = FibCache()


def fib(n: int) -> int:
    """Return f_n (f_0 = f_1 = 1).

    >>> [fib(k) for k in range(7)]
    [1, 1, 2, 3, 5, 8, 13]
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return DEFAULT_CACHE[n]


def fib_ratio(n: int) -> Fraction:
    """Return f_{n+1} / f_n exactly."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return Fraction(fib(n + 1), fib(n))


def cassini(n: int) -> int:
    """f_{n-1} f_{n+1} - f_n^2, which is (-1)^(n+1)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return fib(n - 1) * fib(n + 1) - fib(n) ** 2


def cassini_variant(n: int) -> int:
    """f_{n-1}^2 + f_n f_{n-1} - f_n^2, which is (-1)^(n+1)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    a, b = fib(n - 1), fib(n)
    return a * a + b * a - b * b


def fib_prefix_sum(n: int) -> int:
    """Sum f_0 + ... + f_n by direct accumulation.

    The result equals f_{n+2} - 1; the sum is not computed through that
    identity so it can serve as a check of it.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    DEFAULT_CACHE.warm(n)
    return sum(DEFAULT_CACHE[k] for k in range(n + 1))


def reciprocal_fib_partial(n: int) -> Fraction:
    """Exact partial sum 1/f_0 + ... + 1/f_n."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return sum((Fraction(1, fib(k)) for k in range(n + 1)), Fraction(0))


def golden_ratio(bits: int = 128) -> Fraction:
    """Rational approximation of (1 + sqrt 5)/2 with error below 2**-bits.

    Built from an integer square root, so no binary float is involved.
    """
    if bits < 1:
        raise ValueError("bits must be positive")
    scale = 1 << (bits + 1)
    # isqrt(5 * scale^2) / scale is within 1/scale of sqrt(5), from below.
    root5 = isqrt(5 * scale * scale)
    return Fraction(scale + root5, 2 * scale)
