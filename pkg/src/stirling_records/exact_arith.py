"""Exact scalars: Python ``int`` for integers, ``fractions.Fraction`` for rationals.

Also hosts the error types shared by the rest of the package.
"""
from __future__ import annotations

from fractions import Fraction

Integer = int
Rational = Fraction

# Default enumeration caps, overridable per call and via ``--max-enum``.
TUPLE_CAP = 10**7
POLY_TUPLE_CAP = 10**6
PARTITION_N_MAX = 13


class BoundExceeded(ValueError):
    """An enumeration would exceed its declared cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: {size} exceeds enumeration cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class IdentityViolation(ArithmeticError):
    """An exactness contract failed (inexact division, degree overflow, ...)."""


def binomial(n: int, k: int) -> int:
    if n < 0:
        raise ValueError(f"binomial: n must be nonnegative, got {n}")
    if k < 0 or k > n:
        return 0
    k = min(k, n - k)
    result = 1
    # each prefix product C(n-k+i, i) is an integer, so the division is exact
    for i in range(1, k + 1):
        result = result * (n - k + i) // i
    return result


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial: n must be nonnegative, got {n}")
    result = 1
    for i in range(2, n + 1):
        result *= i
    return result


def falling_factorial(n: int, k: int) -> int:
    result = 1
    for i in range(k):
        result *= n - i
    return result


def exact_div(num: int, den: int, what: str = "division") -> int:
    q, r = divmod(num, den)
    if r:
        raise IdentityViolation(f"{what}: {num} is not divisible by {den}")
    return q


def as_rational(value) -> Fraction:
    """Parse ``"p/q"``, ``"p"``, int or Fraction into a Fraction. Floats are refused."""
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a 'p/q' string or Fraction")
    if isinstance(value, str):
        value = value.strip()
        if "." in value or "e" in value.lower():
            raise ValueError(f"not an exact rational: {value!r}")
    return Fraction(value)


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
