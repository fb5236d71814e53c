"""Prime tables and logarithmic weights.

A segmented Eratosthenes sieve fills a boolean primality array; every
counting and exponential-sum routine downstream consumes either the bit
array or the weight array w[n] = log n for prime n (and 0 otherwise --
prime powers are excluded on purpose: the counts weight primes themselves,
not the von Mangoldt function).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import LimitTooLarge

# primality arrays beyond this need a deliberate override
DEFAULT_MEMORY_LIMIT = 200_000_000
_SEGMENT = 1 << 20


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    is_prime: np.ndarray  # bool, indexed 0..limit
    primes: np.ndarray = field(repr=False)  # ascending int64

    def __contains__(self, n: int) -> bool:
        return 0 <= n <= self.limit and bool(self.is_prime[n])


def _simple_sieve(limit: int) -> np.ndarray:
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask


def sieve(limit: int, memory_limit: int = DEFAULT_MEMORY_LIMIT) -> PrimeTable:
    """Exact primality over [0, limit], segmented for cache friendliness."""
    if limit < 2:
        raise ValueError("sieve limit must be >= 2")
    if limit > memory_limit:
        raise LimitTooLarge(f"sieve limit {limit} exceeds memory bound {memory_limit}")
    if limit <= _SEGMENT:
        mask = _simple_sieve(limit)
        return PrimeTable(limit, mask, np.flatnonzero(mask).astype(np.int64))

    root = int(limit**0.5) + 1
    base_mask = _simple_sieve(root)
    base_primes = np.flatnonzero(base_mask)
    mask = np.ones(limit + 1, dtype=bool)
    mask[: len(base_mask)] = base_mask
    lo = len(base_mask)
    while lo <= limit:
        hi = min(lo + _SEGMENT, limit + 1)
        for p in base_primes:
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start < hi:
                mask[start:hi:p] = False
        lo = hi
    return PrimeTable(limit, mask, np.flatnonzero(mask).astype(np.int64))


def log_weight_array(table: PrimeTable, limit: int) -> np.ndarray:
    """w[n] = log n when n is prime, else 0 (natural log, double precision)."""
    if table.limit < limit:
        raise ValueError("prime table does not cover the requested limit")
    w = np.zeros(limit + 1, dtype=np.float64)
    p = table.primes[table.primes <= limit]
    w[p] = np.log(p.astype(np.float64))
    return w


def chebyshev_theta(table: PrimeTable, limit: int) -> float:
    """Sum of log p over primes p <= limit."""
    p = table.primes[table.primes <= limit].astype(np.float64)
    return float(np.sum(np.log(p)))
