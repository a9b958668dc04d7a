"""Brute-force ground truth for S(n, d).

Two routes that share nothing with the closed-form engine: exhaustive
enumeration of restricted growth strings, and the triangle recurrence.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .exact_arith import PARTITION_N_MAX, BoundExceeded

try:
    from numba import njit
except ImportError:  # pragma: no cover
    njit = None


@dataclass(frozen=True)
class PartitionQuery:
    n: int
    d: int

    def __post_init__(self):
        if self.n < 0 or self.d < 0:
            raise ValueError(f"PartitionQuery needs n, d >= 0, got ({self.n}, {self.d})")


def _tally_rgs(n):
    # Odometer over restricted growth strings a[0..n-1]: a[0] = 0 and
    # a[i] <= 1 + max(a[0..i-1]); m[i] caches max(a[0..i]).
    counts = np.zeros(n + 1, dtype=np.int64)
    if n == 0:
        counts[0] = 1
        return counts
    a = np.zeros(n, dtype=np.int64)
    m = np.zeros(n, dtype=np.int64)
    while True:
        counts[m[n - 1] + 1] += 1
        i = n - 1
        while i > 0 and a[i] == m[i - 1] + 1:
            i -= 1
        if i == 0:
            return counts
        a[i] += 1
        m[i] = max(m[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            m[j] = m[i]


if njit is not None:
    _tally_rgs = njit(cache=True)(_tally_rgs)


@lru_cache(maxsize=None)
def block_count_tally(n: int) -> tuple[int, ...]:
    """Number of set partitions of an n-set by block count, by full enumeration."""
    if n > PARTITION_N_MAX:
        raise BoundExceeded("set-partition enumeration n", n, PARTITION_N_MAX)
    return tuple(int(c) for c in _tally_rgs(n))


def count_set_partitions(q: PartitionQuery) -> int:
    tally = block_count_tally(q.n)
    return tally[q.d] if q.d <= q.n else 0


def stirling_recurrence(n: int, d: int) -> int:
    if n < 0 or d < 0:
        raise ValueError(f"stirling_recurrence needs n, d >= 0, got ({n}, {d})")
    if d > n:
        return 0
    row = [1] + [0] * d  # S(0, .)
    for i in range(1, n + 1):
        new = [0] * (d + 1)
        for k in range(1, min(i, d) + 1):
            new[k] = k * row[k] + row[k - 1]
        row = new
    return row[d]


def bell_triangle(n_max: int) -> list[int]:
    """Bell numbers B_0..B_{n_max} from the Bell (Aitken) triangle."""
    bells = [1]
    row = [1]
    for _ in range(n_max):
        new = [row[-1]]
        for v in row:
            new.append(new[-1] + v)
        row = new
        bells.append(row[0])
    return bells
