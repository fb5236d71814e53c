import math

import numpy as np
import pytest

from beattysums.errors import ToleranceUnreachable
from beattysums.primes import sieve
from beattysums.reals import make_sqrt
from beattysums.singular import log_tail_bound, main_term, singular_series


def test_exact_parity_zeros():
    assert singular_series(10, 3).value == 0.0  # k odd, n even
    assert singular_series(9, 2).value == 0.0  # k even, n odd
    assert singular_series(10, 3).error_bound == 0.0


def test_twin_prime_constant_doubled():
    v = singular_series(16, 2, cutoff=10_000_000)
    assert abs(v.value - 1.3203236316) < 1e-5


def test_matches_direct_product():
    t = sieve(10**6)

    def direct(n, k, P):
        val = 1.0
        for p in t.primes[t.primes <= P]:
            p = int(p)
            if n % p == 0:
                val *= 1 + (-1) ** k / (p - 1) ** (k - 1)
            else:
                val *= 1 + (-1) ** (k + 1) / (p - 1) ** k
        return val

    for n, k in [(100, 2), (105, 3), (16, 2), (999, 3), (4, 4), (31, 5), (2310, 2)]:
        got = singular_series(n, k, cutoff=10**6).value
        want = direct(n, k, 10**6)
        assert abs(got - want) <= 1e-9 * max(1.0, abs(want)), (n, k)


def test_doubling_cutoff_within_error_bound():
    for n, k in [(16, 2), (999, 3), (1024, 2)]:
        v1 = singular_series(n, k, cutoff=1_000_000)
        v2 = singular_series(n, k, cutoff=2_000_000)
        assert abs(v2.value - v1.value) <= v1.error_bound


def test_k3_boundedness():
    vals = [singular_series(n, 3, tol=1e-4).value for n in range(3, 10_001, 2)]
    assert all(0.5 <= v <= 4.0 for v in vals)


def test_tail_bound_dominates_direct_sum_1e7():
    t = sieve(10**7)
    for k in (2, 3):
        for P in (1000, 10_000, 100_000):
            ps = t.primes[t.primes > P].astype(np.float64)
            actual = float(np.abs(np.log1p((-1.0) ** (k + 1) / (ps - 1.0) ** k)).sum())
            assert actual <= log_tail_bound(P, k), (k, P)
            assert log_tail_bound(P, k) <= 4.0 * P ** (1 - k) / (k - 1)


@pytest.mark.slow
def test_tail_bound_dominates_direct_sum_1e8():
    t = sieve(10**8)
    for k in (2, 3):
        P = 1000
        ps = t.primes[t.primes > P].astype(np.float64)
        actual = float(np.abs(np.log1p((-1.0) ** (k + 1) / (ps - 1.0) ** k)).sum())
        assert actual <= log_tail_bound(P, k)


def test_tolerance_unreachable():
    with pytest.raises(ToleranceUnreachable):
        singular_series(16, 2, tol=1e-12)


def test_main_term_zero_when_series_vanishes():
    assert main_term(9, 2, [make_sqrt(2), make_sqrt(3)]) == 0.0


def test_main_term_algebraic_identity():
    n = 999
    mt = main_term(n, 3, [make_sqrt(2)] * 3)
    s = singular_series(n, 3, tol=1.0 / n).value
    assert abs(mt - s * n**2 / (2**1.5 * 2)) < 1e-9 * mt


def test_main_term_k2_composition():
    n = 1000
    mt = main_term(n, 2, [make_sqrt(2), make_sqrt(3)])
    s = singular_series(n, 2, tol=1.0 / n).value
    assert abs(mt / n - s / math.sqrt(6)) < 1e-9
