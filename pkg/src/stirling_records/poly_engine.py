"""Exact dense polynomials, the two sides of the algebraic identity
f_{d,n} = g_{d,n}, and their probabilistic rescalings kappa and rho.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .exact_arith import (
    POLY_TUPLE_CAP,
    BoundExceeded,
    IdentityViolation,
    binomial,
    factorial,
    format_rational,
)


class PolynomialMismatch(IdentityViolation):
    def __init__(self, index: int, left: Fraction, right: Fraction, label: str = ""):
        super().__init__(
            f"{label + ': ' if label else ''}coefficient of x^{index} differs: "
            f"{format_rational(left)} != {format_rational(right)}"
        )
        self.index = index
        self.left = left
        self.right = right


class Polynomial:
    """Univariate polynomial with Fraction coefficients in ascending degree.

    Trailing zeros are stripped, so the zero polynomial has ``coeffs == ()``
    and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Polynomial([{', '.join(format_rational(c) for c in self.coeffs)}])"

    def __add__(self, other):
        m = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.coeff(i) + other.coeff(i) for i in range(m))

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return Polynomial(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __call__(self, x) -> Fraction:
        return eval_poly(self, x)

    def first_difference(self, other: "Polynomial"):
        """Index and values of the lowest differing coefficient, or None."""
        m = max(len(self.coeffs), len(other.coeffs))
        for i in range(m):
            if self.coeff(i) != other.coeff(i):
                return i, self.coeff(i), other.coeff(i)
        return None

    def max_abs_difference(self, other: "Polynomial") -> Fraction:
        m = max(len(self.coeffs), len(other.coeffs))
        return max((abs(self.coeff(i) - other.coeff(i)) for i in range(m)), default=Fraction(0))


def assert_poly_equal(left: Polynomial, right: Polynomial, label: str = "") -> None:
    diff = left.first_difference(right)
    if diff is not None:
        raise PolynomialMismatch(*diff, label=label)


def eval_poly(p: Polynomial, x) -> Fraction:
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


# --- integer coefficient-list helpers used while expanding ---------------

def _mul_int(a: list[int], b: list[int]) -> list[int]:
    if len(a) == 1:
        s = a[0]
        return [s * v for v in b]
    if len(b) == 1:
        s = b[0]
        return [s * v for v in a]
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, v in enumerate(b):
                out[i + j] += u * v
    return out


@lru_cache(maxsize=4096)
def _shifted_power(c: int, g: int) -> tuple[int, ...]:
    """Coefficients of (x - c)^g, ascending."""
    return tuple(binomial(g, i) * (-c) ** (g - i) for i in range(g + 1))


def _check_dn(d: int, n: int, name: str) -> None:
    if not 1 <= d <= n:
        raise ValueError(f"{name} needs 1 <= d <= n, got d={d}, n={n}")


def poly_f(d: int, n: int, cap: int = POLY_TUPLE_CAP) -> Polynomial:
    """d! * sum over 1 <= j_1 < ... < j_d <= n of
    x^(n - j_d) * prod_r (x - (d - r))^(j_{r+1} - j_r - 1), fully expanded.

    Enumerates every tuple; prefix products are shared along the search.
    """
    return _poly_f(d, n, cap)


@lru_cache(maxsize=1024)
def _poly_f(d: int, n: int, cap: int) -> Polynomial:
    _check_dn(d, n, "poly_f")
    size = binomial(n, d)
    if size > cap:
        raise BoundExceeded(f"f tuples for (d={d}, n={n})", size, cap)
    acc = [0] * (n - d + 1)

    def walk(r: int, prev: int, partial: list[int]) -> None:
        if r == d:
            shift = n - prev
            for i, c in enumerate(partial):
                acc[i + shift] += c
            return
        base = d - r
        # leave room for the remaining d - r - 1 indices
        for j in range(prev + 1, n - (d - r - 1) + 1):
            walk(r + 1, j, _mul_int(partial, list(_shifted_power(base, j - prev - 1))))

    walk(0, 0, [1])
    scale = factorial(d)
    return Polynomial(scale * c for c in acc)


def poly_g(d: int, n: int) -> Polynomial:
    """sum_r (-1)^r C(d, r) (x - r)^n expanded by the binomial theorem."""
    if d < 0 or n < 0:
        raise ValueError(f"poly_g needs d, n >= 0, got d={d}, n={n}")
    coeffs = [0] * (n + 1)
    for r in range(d + 1):
        sign_binom = -binomial(d, r) if r % 2 else binomial(d, r)
        for k, c in enumerate(_shifted_power(r, n)):
            coeffs[k] += sign_binom * c
    if n >= d:
        for k in range(n - d + 1, n + 1):
            if coeffs[k]:
                raise IdentityViolation(
                    f"g_(d={d},n={n}) has nonzero coefficient {coeffs[k]} at x^{k} > x^{n - d}"
                )
    return Polynomial(coeffs)


def poly_g_stirling(d: int, n: int) -> Polynomial:
    """d! * sum_{k=d}^{n} C(n, k) (-1)^(d-k) x^(n-k) S(k, d)."""
    from .partition_oracle import stirling_recurrence

    _check_dn(d, n, "poly_g_stirling")
    coeffs = [0] * (n - d + 1)
    for k in range(d, n + 1):
        term = binomial(n, k) * stirling_recurrence(k, d)
        coeffs[n - k] += -term if (k - d) % 2 else term
    scale = factorial(d)
    return Polynomial(scale * c for c in coeffs)


def _nonzero(x, name: str) -> Fraction:
    x = Fraction(x)
    if x == 0:
        raise ValueError(f"{name} is undefined at x = 0")
    return x


def signed_g(d: int, n: int, x) -> Fraction:
    """g_{d,n}(x) with sign (-1)^n applied when n > d."""
    value = eval_poly(poly_g(d, n), x)
    return -value if n > d and n % 2 else value


def g_value(d: int, n: int, x) -> Fraction:
    x = Fraction(x)
    total = Fraction(0)
    for r in range(d + 1):
        term = binomial(d, r) * (x - r) ** n
        total += -term if r % 2 else term
    return total


def kappa(d: int, n: int, x) -> Fraction:
    x = _nonzero(x, "kappa")
    return g_value(d, n, x) / x**n


def rho(d: int, n: int, x, cap: int = POLY_TUPLE_CAP) -> Fraction:
    """(d!/x^d) * sum over j_1 < ... < j_d <= n of prod_r (1 - (d-r)/x)^gap_r."""
    x = _nonzero(x, "rho")
    _check_dn(d, n, "rho")
    size = binomial(n, d)
    if size > cap:
        raise BoundExceeded(f"rho tuples for (d={d}, n={n})", size, cap)
    bases = [1 - Fraction(d - r) / x for r in range(d)]
    total = Fraction(0)
    for js in combinations(range(1, n + 1), d):
        prod = Fraction(1)
        prev = 0
        for r, j in enumerate(js):
            prod *= bases[r] ** (j - prev - 1)
            prev = j
        total += prod
    return factorial(d) * total / x**d


def f_value(d: int, n: int, x, cap: int = POLY_TUPLE_CAP) -> Fraction:
    """f_{d,n}(x); f_{0,n} is taken as x^n (the empty tuple with j_0 = 0)."""
    if d == 0:
        return Fraction(x) ** n
    return eval_poly(poly_f(d, n, cap), x)


def stirling_from_f_inversion(n: int, d: int, x, cap: int = POLY_TUPLE_CAP) -> int:
    """S(n, d) = (1/d!) sum_{k=d}^{n} C(n, k) (-1)^(k-d) x^(n-k) f_{d,k}(x).

    Binomial inversion of b_k = S(k, d)/x^k against
    a_k = (-1)^(k-d) f_{d,k}(x) / (d! x^k).
    """
    _check_dn(d, n, "stirling_from_f_inversion")
    x = _nonzero(x, "stirling_from_f_inversion")
    total = Fraction(0)
    for k in range(d, n + 1):
        term = binomial(n, k) * x ** (n - k) * f_value(d, k, x, cap)
        total += -term if (k - d) % 2 else term
    total /= factorial(d)
    if total.denominator != 1:
        raise IdentityViolation(
            f"inversion for S({n},{d}) at x={format_rational(x)} is not an integer: "
            f"{format_rational(total)}"
        )
    return total.numerator


def printed_inversion(n: int, d: int, x, cap: int = POLY_TUPLE_CAP) -> Fraction:
    """The uncorrected form sum_{k=0}^{n} C(n, k) (-1)^(n-k) f_{k,n}(x) / k!.

    ``d`` is accepted for symmetry but does not enter the formula.
    """
    x = _nonzero(x, "printed_inversion")
    total = Fraction(0)
    for k in range(n + 1):
        term = binomial(n, k) * f_value(k, n, x, cap) / factorial(k)
        total += -term if (n - k) % 2 else term
    return total
