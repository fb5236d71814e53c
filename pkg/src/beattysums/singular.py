"""Singular series for sums of k primes, with certified truncation error.

The arithmetic factor for representing n as an ordered sum of k primes is

    S_k(n) = prod_{p | n} (1 + (-1)^k / (p-1)^(k-1))
           * prod_{p not| n} (1 + (-1)^(k+1) / (p-1)^k).

Structural facts used below:

  * the p = 2 factor vanishes exactly when n and k have opposite parity,
    so S_k(n) = 0 iff n != k (mod 2) -- handled as an exact short-circuit;
  * in the non-vanishing case every factor is strictly positive, so the
    product can be accumulated in log space;
  * the factors over p not dividing n converge like (p-1)^(-k); truncating at
    a cutoff P leaves a log-tail of at most

        sum_{p > P} |log(1 + (-1)^(k+1) (p-1)^(-k))|
          <= 2 * sum_{m >= P} m^(-k)                      (|log(1+x)| <= 2|x|
                                                            for |x| <= 1/2,
                                                            and p-1 >= P)
          <= 2 * (P^(-k) + P^(1-k)/(k-1))
          <= 4 * P^(1-k) / (k-1)        for P >= max(7, k-1),

    which the code converts into an absolute error bound on the value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ToleranceUnreachable
from .primes import PrimeTable, sieve
from .reals import RealExpr, to_float

__all__ = ["SingularSeriesValue", "singular_series", "main_term", "log_tail_bound"]

MAX_CUTOFF = 100_000_000

_table_cache: dict[int, PrimeTable] = {}


def _primes_upto(limit: int) -> PrimeTable:
    limit = max(limit, 16)
    for have in _table_cache:
        if have >= limit:
            return _table_cache[have]
    t = sieve(limit)
    _table_cache.clear()
    _table_cache[limit] = t
    return t


@dataclass(frozen=True)
class SingularSeriesValue:
    n: int
    k: int
    value: float
    error_bound: float
    cutoff_prime: int

    def __post_init__(self):
        if self.error_bound < 0:
            raise ValueError("error bound must be nonnegative")


def log_tail_bound(P: int, k: int) -> float:
    """Certified bound on the neglected log-mass beyond the cutoff P.

    Valid for P >= max(7, k-1); see the derivation in the module docstring.
    The constant is conservative on purpose: 2*(1 + (k-1)/P) <= 4 in the
    supported regime.
    """
    if P < max(7, k - 1):
        raise ValueError("cutoff too small for the tail bound to apply")
    return 2.0 * (P ** (1 - k) / (k - 1) + float(P) ** (-k))


def _factor_exact(p: int, k: int) -> float:
    return 1.0 + (-1.0) ** k / float(p - 1) ** (k - 1)


def _factor_generic(p, k: int):
    return 1.0 + (-1.0) ** (k + 1) / (np.asarray(p, dtype=np.float64) - 1.0) ** k


_BASE_CACHE: dict[tuple[int, int], tuple[float, int]] = {}


def _generic_base(k: int, cutoff: int) -> tuple[float, int]:
    """(sum of log generic factors over odd primes <= cutoff, prime count)."""
    key = (k, cutoff)
    hit = _BASE_CACHE.get(key)
    if hit is None:
        table = _primes_upto(cutoff)
        primes = table.primes[(table.primes <= cutoff) & (table.primes > 2)]
        hit = (float(np.sum(np.log(_factor_generic(primes, k)))), len(primes) + 1)
        if len(_BASE_CACHE) > 32:
            _BASE_CACHE.clear()
        _BASE_CACHE[key] = hit
    return hit


def _prime_divisors(n: int, table: PrimeTable) -> list[int]:
    out = []
    m = n
    for p in table.primes:
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
    if m > 1:
        out.append(m)
    return out


def singular_series(
    n: int,
    k: int,
    tol: float = 1e-6,
    cutoff: int | None = None,
    max_cutoff: int = MAX_CUTOFF,
) -> SingularSeriesValue:
    """Evaluate S_k(n) with an error bound certified by the truncation tail.

    ``cutoff`` pins the truncation prime directly; otherwise the smallest
    cutoff achieving ``error_bound <= tol * value`` is chosen, raising
    ToleranceUnreachable when that exceeds ``max_cutoff``.
    """
    if n < 1 or k < 2:
        raise ValueError("need n >= 1 and k >= 2")
    if tol is not None and tol <= 0:
        raise ValueError("tol must be positive")
    if (n - k) % 2 != 0:
        return SingularSeriesValue(n, k, 0.0, 0.0, 2)

    if cutoff is None:
        # tail(P) ~ 4 P^(1-k)/(k-1) <= tol/2  =>  P >= (8/((k-1) tol))^(1/(k-1))
        want = (8.0 / ((k - 1) * tol)) ** (1.0 / (k - 1))
        cutoff = int(max(7, k - 1, math.ceil(want)))
        if cutoff > max_cutoff:
            raise ToleranceUnreachable(
                f"tolerance {tol} needs cutoff ~{cutoff} beyond capacity {max_cutoff}"
            )
    if cutoff > max_cutoff:
        raise ToleranceUnreachable(f"cutoff {cutoff} beyond capacity {max_cutoff}")
    cutoff = max(cutoff, 7, k - 1)

    divisors = _prime_divisors(n, _primes_upto(int(math.isqrt(n)) + 1))
    base_sum, n_base = _generic_base(k, cutoff)

    # the base product runs over odd primes up to the cutoff (the p = 2
    # generic factor is an exact zero for even k and is handled explicitly);
    # swap each prime divisor of n from its generic factor to the exact form
    log_total = base_sum
    for p in divisors:
        if p != 2 and p <= cutoff:
            log_total -= math.log(_factor_generic(p, k))
        log_total += math.log(_factor_exact(p, k))
    if 2 not in divisors:
        log_total += math.log(_factor_generic(2, k))  # nonzero: k odd here

    value = math.exp(log_total)
    tail = log_tail_bound(cutoff, k)
    # float accumulation noise: one ulp per summed factor, generously padded
    float_noise = 4.0 * n_base * np.finfo(np.float64).eps
    error_bound = value * math.expm1(tail + float_noise)
    return SingularSeriesValue(n, k, value, error_bound, int(cutoff))


def main_term(n: int, k: int, alphas: list[RealExpr]) -> float:
    """Predicted main term S_k(n) * n^(k-1) / (alpha_1...alpha_k * (k-1)!)."""
    if len(alphas) != k:
        raise ValueError("need exactly k alpha values")
    ss = singular_series(n, k, tol=1.0 / n)
    if ss.value == 0.0:
        return 0.0
    prod_alpha = 1.0
    for a in alphas:
        prod_alpha *= to_float(a)
    return ss.value * float(n) ** (k - 1) / (prod_alpha * math.factorial(k - 1))
