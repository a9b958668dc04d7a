"""Stirling-type numbers from closed forms: Euler's alternating sum, the
record-time sum (naive enumeration and O(n*d) DP), S2 sums of products with
repetition and the duality S(n, d) = S2(d, n - d), and the harmonic-type
alternating sum with its multiple-sum expansion.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from .exact_arith import TUPLE_CAP, BoundExceeded, binomial, exact_div, factorial


@dataclass
class OpCounter:
    """Counts big-integer multiplications (a power counts as one)."""

    mults: int = 0

    def tick(self, k: int = 1) -> None:
        self.mults += k


def _tick(ops: OpCounter | None, k: int = 1) -> None:
    if ops is not None:
        ops.mults += k


def _check_nd(n: int, d: int, name: str) -> None:
    if not 1 <= d <= n:
        raise ValueError(f"{name} needs 1 <= d <= n, got n={n}, d={d}")


def euler_alternating_sum(n: int, d: int, ops: OpCounter | None = None) -> int:
    """sum_{r=0}^{d} (-1)^r C(d, r) r^n, with 0^0 = 1."""
    total = 0
    for r in range(d + 1):
        term = binomial(d, r) * r**n  # Python gives 0**0 == 1
        _tick(ops, 2)
        total += -term if r % 2 else term
    return total


def stirling_euler(n: int, d: int, ops: OpCounter | None = None) -> int:
    if n < 0 or d < 0:
        raise ValueError(f"stirling_euler needs n, d >= 0, got ({n}, {d})")
    s = euler_alternating_sum(n, d, ops)
    if d % 2:
        s = -s
    return exact_div(s, factorial(d), f"euler sum for S({n},{d})")


def record_tuples(n: int, d: int, cap: int = TUPLE_CAP):
    """Strictly increasing (j_1, ..., j_{d-1}) with 1 <= j_1 and j_{d-1} < n."""
    _check_nd(n, d, "record_tuples")
    size = binomial(n - 1, d - 1)
    if size > cap:
        raise BoundExceeded(f"record tuples for (n={n}, d={d})", size, cap)
    return combinations(range(1, n), d - 1)


def record_weight(js: tuple[int, ...], n: int, d: int, ops: OpCounter | None = None) -> int:
    # gap m (from j_{m-1} to j_m, j_0 = 0, j_d = n) carries base d - m + 1
    w = 1
    prev = 0
    for m, j in enumerate(js, start=1):
        w *= (d - m + 1) ** (j - prev)
        _tick(ops, 2)
        prev = j
    return w  # final gap has base 1


def record_weight_sum(n: int, d: int, cap: int = TUPLE_CAP, ops: OpCounter | None = None) -> int:
    total = 0
    for js in record_tuples(n, d, cap):
        total += record_weight(js, n, d, ops)
    return total


def stirling_record_sum(n: int, d: int, cap: int = TUPLE_CAP, ops: OpCounter | None = None) -> int:
    _check_nd(n, d, "stirling_record_sum")
    return exact_div(record_weight_sum(n, d, cap, ops), factorial(d), f"record sum for S({n},{d})")


def record_weight_dp(n: int, d: int, ops: OpCounter | None = None) -> int:
    """Same value as :func:`record_weight_sum` without enumerating tuples.

    ``row[m]`` holds D[t][m], the weighted sum over tuples whose m-th record
    lands exactly at step t; D[t][m] = (d-m+1) * (D[t-1][m] + D[t-1][m-1]).
    """
    _check_nd(n, d, "record_weight_dp")
    k = d - 1
    row = [1] + [0] * k  # t = 0
    total = row[k]
    for t in range(1, n):
        new = [0] * (k + 1)
        for m in range(1, min(t, k) + 1):
            new[m] = (d - m + 1) * (row[m] + row[m - 1])
            _tick(ops)
        row = new
        total += row[k]
    return total


def stirling_record_dp(n: int, d: int, ops: OpCounter | None = None) -> int:
    _check_nd(n, d, "stirling_record_dp")
    return exact_div(record_weight_dp(n, d, ops), factorial(d), f"record DP for S({n},{d})")


def s2_enum(n: int, d: int, cap: int = TUPLE_CAP) -> int:
    """Sum of products over weakly increasing d-tuples drawn from 1..n."""
    if n < 1 or d < 0:
        raise ValueError(f"s2_enum needs n >= 1, d >= 0, got ({n}, {d})")
    size = binomial(n + d - 1, d)
    if size > cap:
        raise BoundExceeded(f"weak tuples for S2({n},{d})", size, cap)
    total = 0
    for js in combinations_with_replacement(range(1, n + 1), d):
        p = 1
        for j in js:
            p *= j
        total += p
    return total


def s2_nested(n: int, d: int, ops: OpCounter | None = None) -> int:
    """S2 via the iterated form sum_{j_d} j_d sum_{j_{d-1} >= j_d} j_{d-1} ...

    Each level replaces v[j] by the suffix sum sum_{i >= j} i * v[i].
    """
    if n < 1 or d < 0:
        raise ValueError(f"s2_nested needs n >= 1, d >= 0, got ({n}, {d})")
    if d == 0:
        return 1
    v = [1] * (n + 2)
    for _ in range(d):
        acc = 0
        new = [0] * (n + 2)
        for j in range(n, 0, -1):
            acc += j * v[j]
            _tick(ops)
            new[j] = acc
        v = new
    return v[1]


def stirling_via_duality(n: int, d: int, ops: OpCounter | None = None) -> int:
    _check_nd(n, d, "stirling_via_duality")
    return s2_nested(d, n - d, ops)


def harmonic_alt_sum(n: int, d: int) -> Fraction:
    """sum_{r=1}^{d} C(d, r) (-1)^(r-1) / r^n."""
    if n < 1 or d < 1:
        raise ValueError(f"harmonic_alt_sum needs n, d >= 1, got ({n}, {d})")
    total = Fraction(0)
    for r in range(1, d + 1):
        term = Fraction(binomial(d, r), r**n)
        total += term if r % 2 else -term
    return total


def dilcher_multiple_sum(n: int, d: int, cap: int = TUPLE_CAP) -> Fraction:
    """sum over 1 <= j_1 <= ... <= j_n <= d of 1 / (j_1 j_2 ... j_n)."""
    if n < 1 or d < 1:
        raise ValueError(f"dilcher_multiple_sum needs n, d >= 1, got ({n}, {d})")
    size = binomial(n + d - 1, n)
    if size > cap:
        raise BoundExceeded(f"weak tuples for Dilcher sum ({n},{d})", size, cap)
    # common denominator (d!)^n keeps the inner loop in integers
    big = factorial(d) ** n
    total = 0
    for js in combinations_with_replacement(range(1, d + 1), n):
        p = 1
        for j in js:
            p *= j
        total += big // p
    return Fraction(total, big)


STIRLING_METHODS = ("oracle", "recurrence", "euler", "record", "record-dp", "duality")


def stirling(n: int, d: int, method: str, cap: int = TUPLE_CAP, ops: OpCounter | None = None) -> int:
    """Dispatch S(n, d) to one of :data:`STIRLING_METHODS`."""
    from .partition_oracle import PartitionQuery, count_set_partitions, stirling_recurrence

    if method == "oracle":
        return count_set_partitions(PartitionQuery(n, d))
    if method == "recurrence":
        return stirling_recurrence(n, d)
    if method == "euler":
        return stirling_euler(n, d, ops)
    if method == "record":
        return stirling_record_sum(n, d, cap, ops)
    if method == "record-dp":
        return stirling_record_dp(n, d, ops)
    if method == "duality":
        return stirling_via_duality(n, d, ops)
    raise ValueError(f"unknown method {method!r}; choose from {', '.join(STIRLING_METHODS)}")
