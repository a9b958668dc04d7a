"""Balls into boxes 0..d: each ball lands in box i (1 <= i <= d) with
probability 1/x and in box 0 otherwise. Event B: boxes 1..d all occupied.

Exact P(B) by inclusion-exclusion, by record times, and by brute-force
enumeration of outcome sequences; plus a seeded Monte Carlo estimate.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .exact_arith import POLY_TUPLE_CAP, TUPLE_CAP, BoundExceeded, binomial, factorial

# Trials are cut into fixed blocks so results do not depend on worker count.
BLOCK_TRIALS = 1 << 16


def _check_domain(n: int, d: int, x) -> Fraction:
    x = Fraction(x)
    if d < 1 or n < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    if x < d:
        raise ValueError(f"need x >= d for probabilities, got x={x}, d={d}")
    return x


def exact_prob_incl_excl(n: int, d: int, x) -> Fraction:
    x = _check_domain(n, d, x)
    total = Fraction(0)
    for r in range(d + 1):
        term = binomial(d, r) * (1 - Fraction(r) / x) ** n
        total += -term if r % 2 else term
    return total


def exact_prob_record_times(n: int, d: int, x, cap: int = POLY_TUPLE_CAP) -> Fraction:
    x = _check_domain(n, d, x)
    size = binomial(n, d)
    if size > cap:
        raise BoundExceeded(f"record-time tuples for (n={n}, d={d})", size, cap)
    q = 1 / x
    stay = [1 - (d - r) * q for r in range(d)]  # no new box while r are filled
    total = Fraction(0)
    for js in combinations(range(1, n + 1), d):
        p = Fraction(1)
        prev = 0
        for r, j in enumerate(js):
            p *= q * stay[r] ** (j - prev - 1)
            prev = j
        total += p
    return factorial(d) * total


@lru_cache(maxsize=256)
def covering_counts(n: int, d: int, cap: int = TUPLE_CAP) -> tuple[int, ...]:
    """counts[z] = number of sequences in {0..d}^n hitting every box 1..d
    with exactly z balls in box 0. Enumerates all (d+1)^n sequences."""
    size = (d + 1) ** n
    if size > cap:
        raise BoundExceeded(f"outcome sequences for (n={n}, d={d})", size, cap)
    full = (1 << (d + 1)) - 2  # bits 1..d
    counts = np.zeros(n + 1, dtype=np.int64)
    chunk = 1 << 20
    for start in range(0, size, chunk):
        idx = np.arange(start, min(start + chunk, size), dtype=np.int64)
        mask = np.zeros(idx.shape, dtype=np.int64)
        zeros = np.zeros(idx.shape, dtype=np.int64)
        for _ in range(n):
            digit = idx % (d + 1)
            idx //= d + 1
            mask |= np.left_shift(1, digit)
            zeros += digit == 0
        hit = (mask & full) == full
        counts += np.bincount(zeros[hit], minlength=n + 1)
    return tuple(int(c) for c in counts)


def brute_force_prob(n: int, d: int, x, cap: int = TUPLE_CAP) -> Fraction:
    x = _check_domain(n, d, x)
    q = 1 / x
    p0 = 1 - d * q
    counts = covering_counts(n, d, cap)
    return sum((c * p0**z * q ** (n - z) for z, c in enumerate(counts)), Fraction(0))


@dataclass(frozen=True)
class SimConfig:
    n: int
    d: int
    x: Fraction
    trials: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        if not 1 <= self.d <= self.n:
            raise ValueError(f"need 1 <= d <= n, got n={self.n}, d={self.d}")
        if self.x < self.d:
            raise ValueError(f"need x >= d, got x={self.x}, d={self.d}")
        if self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


@dataclass(frozen=True)
class SimResult:
    hits: int
    trials: int
    estimate: float
    exact: Fraction
    z_score: float | None  # None when exact is 0 or 1


def _block_hits(cfg: SimConfig, thresholds: np.ndarray, block: int) -> int:
    # per-block stream derived from (seed, block) through SeedSequence hashing
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(cfg.seed, spawn_key=(block,))))
    m = min(BLOCK_TRIALS, cfg.trials - block * BLOCK_TRIALS)
    u = rng.random((m, cfg.n))
    # searchsorted over cumulative [1/x, 2/x, ..., d/x]: i < d -> box i+1, i == d -> box 0
    slot = np.searchsorted(thresholds, u, side="right")
    occupied = np.zeros((m, cfg.d + 1), dtype=bool)
    occupied[np.arange(m)[:, None], slot] = True
    return int(occupied[:, : cfg.d].all(axis=1).sum())


def simulate(cfg: SimConfig, threads: int = 1) -> SimResult:
    q = 1.0 / float(cfg.x)
    thresholds = np.array([(i + 1) * q for i in range(cfg.d)])
    if cfg.x == cfg.d:
        thresholds[-1] = 1.0  # box 0 has no mass; guard against rounding
    blocks = range(-(-cfg.trials // BLOCK_TRIALS))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            hits = sum(pool.map(lambda b: _block_hits(cfg, thresholds, b), blocks))
    else:
        hits = sum(_block_hits(cfg, thresholds, b) for b in blocks)
    exact = exact_prob_incl_excl(cfg.n, cfg.d, cfg.x)
    estimate = hits / cfg.trials
    z = None
    if 0 < exact < 1:
        p = float(exact)
        z = abs(estimate - p) / math.sqrt(p * (1 - p) / cfg.trials)
    return SimResult(hits=hits, trials=cfg.trials, estimate=estimate, exact=exact, z_score=z)
