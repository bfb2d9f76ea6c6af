"""Exact integer/rational helpers shared by every other module.

Rationals are plain :class:`fractions.Fraction` values (arbitrary precision,
always in lowest terms with positive denominator).  Nothing in this package
ever touches floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction


def binom(n: int, k: int) -> int:
    """Binomial coefficient C(n, k), zero-extended outside 0 <= k <= n.

    The zero extension (k < 0, k > n, or n < 0 all give 0) is load-bearing:
    the marked-point counting formulas are written uniformly in an index r
    and silently rely on C(2n-2, r-2) = 0 when r < 2.
    """
    if n < 0 or k < 0 or k > n:
        return 0
    return math.comb(n, k)


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test.

    All routed inputs are below 200 (g + n + 1 for small genus), so trial
    division is plenty.
    """
    if n < 0:
        raise ValueError("is_prime expects n >= 0")
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def format_rational(q: Fraction | int) -> str:
    """Canonical text form: "p/q" in lowest terms with q > 0, "p" when q == 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`format_rational`; accepts any "p/q" or "p" string."""
    return Fraction(text.strip())
