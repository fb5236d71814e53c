import math
from fractions import Fraction

import numpy as np
import pytest

from beattysums.beatty import BeattySequence
from beattysums.errors import NotRepresentable, ValidationError
from beattysums.reals import make_const, make_quadratic, make_rational, make_sqrt


def test_member_via_floor_sqrt2(seq_sqrt2):
    assert [seq_sqrt2.member_via_floor(m) for m in range(1, 9)] == [1, 2, 4, 5, 7, 8, 9, 11]


def test_member_via_floor_wythoff(seq_phi):
    assert [seq_phi.member_via_floor(m) for m in range(1, 6)] == [1, 3, 4, 6, 8]


def test_member_via_floor_zero(seq_sqrt2):
    assert seq_sqrt2.member_via_floor(0) == 0


def test_contains_examples(seq_sqrt2):
    assert seq_sqrt2.contains(3) is False
    assert seq_sqrt2.contains(4) is True


def test_contains_roundtrip(seq_sqrt3):
    for m in range(1, 200):
        n = seq_sqrt3.member_via_floor(m)
        assert seq_sqrt3.contains(n)


def test_enumerate_examples(seq_sqrt2):
    assert list(seq_sqrt2.enumerate_members(11)) == [1, 2, 4, 5, 7, 8, 9, 11]
    # limit below the first member
    B = BeattySequence(make_quadratic(0, 1, 1, 17), make_rational(10))  # alpha=sqrt(17), beta=10
    first = B.member_via_floor(-1)  # negative m can still land >= 1 with beta=10
    assert list(B.enumerate_members(3)) == [v for v in (B.member_via_floor(m) for m in range(-10, 10)) if 1 <= v <= 3]


def test_membership_equivalence_1e5(seq_sqrt2, seq_phi):
    for B in (seq_sqrt2, seq_phi):
        en = set(B.enumerate_members(100_000).tolist())
        vals = np.arange(1, 100_001)
        member, _ = B.membership_table(vals)
        assert set(vals[member].tolist()) == en


def test_membership_matches_scalar_contains(seq_sqrt2):
    vals = np.arange(1, 5_001)
    member, _ = seq_sqrt2.membership_table(vals)
    for n in range(1, 5_001):
        assert member[n - 1] == seq_sqrt2.contains(n)


def test_counting_density(seq_sqrt2):
    g = 1 / math.sqrt(2)
    for L in (10, 137, 4096, 99_999):
        count = len(seq_sqrt2.enumerate_members(L))
        predicted = math.floor(g * L + g)
        assert abs(count - predicted) <= 1


def test_density_at_1e6(seq_sqrt2):
    count = len(seq_sqrt2.enumerate_members(1_000_000))
    assert abs(count / 1e6 - 1 / math.sqrt(2)) < 2e-6


def test_prime_mask_example(seq_sqrt2, table_1e5):
    mask = seq_sqrt2.prime_mask(24, __import__("beattysums.primes", fromlist=["sieve"]).sieve(24))
    assert set(np.flatnonzero(mask).tolist()) == {2, 5, 7, 11, 19}


def test_prime_mask_is_contains_and_prime(seq_sqrt3, table_1e4):
    mask = seq_sqrt3.prime_mask(10_000, table_1e4)
    for p in (2, 3, 5, 7, 97, 9973):
        assert mask[p] == (table_1e4.is_prime[p] and seq_sqrt3.contains(p))
    assert not mask[4] and not mask[9]


def test_dense_sequence_captures_all_primes(table_1e4):
    B = BeattySequence(make_quadratic(10**6, 1, 10**6, 2), make_rational(0))
    mask = B.prime_mask(1000, table_1e4)
    want = table_1e4.primes[table_1e4.primes <= 1000]
    assert mask.sum() == len(want)


def test_rational_alpha_refused():
    with pytest.raises(ValidationError):
        BeattySequence(make_rational(Fraction(3, 2)), make_rational(0))


def test_alpha_below_one_refused():
    with pytest.raises(ValidationError):
        BeattySequence(make_sqrt(2).affine(Fraction(1, 2), 0), make_rational(0))


def test_nonzero_beta():
    B = BeattySequence(make_sqrt(2), make_rational(Fraction(1, 2)))
    expected = [math.floor(math.sqrt(2) * m + 0.5) for m in range(1, 100)]
    assert [B.member_via_floor(m) for m in range(1, 100)] == expected
    members = set(B.enumerate_members(100).tolist())
    for n in range(1, 101):
        assert B.contains(n) == (n in members)


def test_quadratic_beta_same_field():
    B = BeattySequence(make_sqrt(2), make_sqrt(8))
    expected = [math.floor(math.sqrt(2) * m + 2 * math.sqrt(2)) for m in range(1, 60)]
    assert [B.member_via_floor(m) for m in range(1, 60)] == expected


def test_incompatible_beta_refused():
    with pytest.raises(NotRepresentable):
        BeattySequence(make_sqrt(2), make_sqrt(3))


def test_transcendental_alpha():
    B = BeattySequence(make_const("pi"), make_rational(0))
    assert [B.member_via_floor(m) for m in range(1, 6)] == [3, 6, 9, 12, 15]
    assert B.contains(3) and not B.contains(4)
    members = set(B.enumerate_members(500).tolist())
    for n in range(1, 501):
        assert B.contains(n) == (n in members)


def test_gamma_times_alpha_is_one(seq_sqrt2, seq_phi):
    from beattysums.reals import mul_expr

    for B in (seq_sqrt2, seq_phi, BeattySequence(make_const("e"), make_rational(0))):
        prod = mul_expr(B.alpha, B.gamma)
        assert prod.is_rational() and prod.as_fraction() == 1
