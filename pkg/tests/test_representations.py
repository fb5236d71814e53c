import math

import numpy as np
import pytest

from beattysums.beatty import BeattySequence
from beattysums.errors import LimitTooLarge
from beattysums.reals import make_quadratic, make_rational, make_sqrt
from beattysums.representations import (
    SmoothedWorkspace,
    Workspace,
    brute_force_table,
    count_all_upto,
    count_exact,
    exceptional_scan,
    export_table_csv,
    smoothed_count,
    smoothed_sandwich,
)


def test_count_exact_examples(seq_sqrt2):
    pair = [seq_sqrt2, seq_sqrt2]
    assert count_exact(12, pair, "unweighted") == 2  # (5,7), (7,5)
    assert count_exact(4, pair, "unweighted") == 1  # (2,2)
    assert count_exact(6, pair, "unweighted") == 0  # 3 is not a member


def test_count_exact_weighted_example(seq_sqrt2):
    pair = [seq_sqrt2, seq_sqrt2]
    expect = 2 * math.log(5) * math.log(7)
    assert abs(count_exact(12, pair, "weighted") - expect) < 1e-12


def test_oracle_equivalence_k2(seq_sqrt2, seq_sqrt3):
    seqs = [seq_sqrt2, seq_sqrt3]
    fast = count_all_upto(800, seqs, "unweighted")
    ws = Workspace.build(seqs, 800)
    for n in range(2, 801):
        assert fast.values[n] == count_exact(n, seqs, "unweighted", workspace=ws)


def test_oracle_equivalence_weighted_k2(seq_sqrt2, seq_sqrt3):
    seqs = [seq_sqrt2, seq_sqrt3]
    fast = count_all_upto(800, seqs, "weighted")
    ws = Workspace.build(seqs, 800)
    for n in range(4, 801):
        want = count_exact(n, seqs, "weighted", workspace=ws)
        assert abs(fast.values[n] - want) <= 1e-6 * max(1.0, abs(want))


def test_oracle_equivalence_k3_small(seq_sqrt2, seq_sqrt3, seq_sqrt5):
    seqs = [seq_sqrt2, seq_sqrt3, seq_sqrt5]
    fast = count_all_upto(400, seqs, "unweighted")
    brute = brute_force_table(400, seqs, "unweighted")
    assert np.array_equal(fast.values, brute.values)


def test_parity_structure_k2_beta0(seq_sqrt2, seq_sqrt3):
    # odd n can only be hit through the prime 2
    seqs = [seq_sqrt2, seq_sqrt3]
    table = count_all_upto(400, seqs, "unweighted")
    ws = Workspace.build(seqs, 400)
    for n in range(5, 401, 2):
        if table.values[n]:
            two_in_first = ws.masks[0][2] and ws.table.is_prime[n - 2] and ws.masks[1][n - 2]
            two_in_second = ws.masks[1][2] and ws.table.is_prime[n - 2] and ws.masks[0][n - 2]
            assert two_in_first or two_in_second, n


def test_convolution_order_invariance(seq_sqrt2):
    seqs = [seq_sqrt2, seq_sqrt2, seq_sqrt2]
    a = count_all_upto(600, seqs, "unweighted")
    b = count_all_upto(600, list(reversed(seqs)), "unweighted")
    assert np.array_equal(a.values, b.values)


def test_count_exact_k4_matches_product_enumeration(seq_sqrt2, table_1e4):
    import itertools

    seqs = [seq_sqrt2] * 4
    members = [int(p) for p in table_1e4.primes[table_1e4.primes <= 30] if seq_sqrt2.contains(int(p))]
    fast = count_all_upto(32, seqs, "unweighted")
    for n in (20, 24, 30, 32):
        want = sum(1 for tup in itertools.product(members, repeat=4) if sum(tup) == n)
        assert count_exact(n, seqs, "unweighted") == want
        assert fast.values[n] == want


def test_smoothed_rejects_inadmissible_width(seq_sqrt2, seq_sqrt3):
    from beattysums.errors import InvalidWidth

    with pytest.raises(InvalidWidth):
        smoothed_count(100, [seq_sqrt2, seq_sqrt3], 0.2, "plus")


def test_threads_match_single(seq_sqrt2, seq_sqrt3):
    seqs = [seq_sqrt2, seq_sqrt3]
    one = brute_force_table(300, seqs, "unweighted", threads=1)
    two = brute_force_table(300, seqs, "unweighted", threads=2)
    assert np.array_equal(one.values, two.values)


def test_limit_guard(seq_sqrt2, seq_sqrt3):
    with pytest.raises(LimitTooLarge):
        count_all_upto(10**7, [seq_sqrt2, seq_sqrt3], "unweighted")


def test_sandwich_small_range(seq_sqrt2, seq_sqrt3):
    seqs = [seq_sqrt2, seq_sqrt3]
    ws = SmoothedWorkspace.build(seqs, 2000, 0.01)
    for n in range(4, 2001, 13):
        lo, mid, hi = smoothed_sandwich(n, seqs, 0.01, workspace=ws)
        assert lo <= mid <= hi


def test_sandwich_matches_exact_weighted(seq_sqrt2, seq_sqrt3):
    seqs = [seq_sqrt2, seq_sqrt3]
    n = 1000
    _, sharp, _ = smoothed_sandwich(n, seqs, 0.01)
    want = count_exact(n, seqs, "weighted")
    assert abs(sharp - want) <= 1e-9 * max(1.0, abs(want))


def test_smoothed_tightens_as_width_shrinks(seq_sqrt2, seq_sqrt3):
    seqs = [seq_sqrt2, seq_sqrt3]
    n = 500
    wide = smoothed_count(n, seqs, 0.02, "plus")
    narrow = smoothed_count(n, seqs, 0.005, "plus")
    assert narrow <= wide + 1e-9
    wide_m = smoothed_count(n, seqs, 0.02, "minus")
    narrow_m = smoothed_count(n, seqs, 0.005, "minus")
    assert narrow_m >= wide_m - 1e-9


def test_smoothed_equals_sharp_when_no_transition_hits(seq_sqrt2, seq_sqrt3):
    # with a tiny width almost no prime lands in a transition zone; find an n
    # whose summands all sit in plateaus, where the three sums agree exactly
    seqs = [seq_sqrt2, seq_sqrt3]
    ws = SmoothedWorkspace.build(seqs, 200, 1e-4)
    hits = 0
    for n in range(4, 201):
        lo, mid, hi = smoothed_sandwich(n, seqs, 1e-4, workspace=ws)
        if lo == mid == hi and mid > 0:
            hits += 1
    assert hits > 50


def test_exceptional_scan_definition(seq_sqrt2, seq_sqrt3):
    exc = exceptional_scan(2000, seq_sqrt2, seq_sqrt3)
    assert all(n % 2 == 0 for n in exc)
    assert all(count_exact(n, [seq_sqrt2, seq_sqrt3], "unweighted") == 0 for n in exc)
    table = count_all_upto(2000, [seq_sqrt2, seq_sqrt3], "unweighted")
    for n in range(4, 2001, 2):
        assert (n in exc) == (table.values[n] == 0)


def test_exceptional_scan_dense_matches_double_loop(table_1e4):
    B = BeattySequence(make_quadratic(10**6, 1, 10**6, 2), make_rational(0))
    x = 500
    exc = exceptional_scan(x, B, B)
    primes = [int(p) for p in table_1e4.primes[table_1e4.primes <= x]]
    pset = set(primes)
    direct = []
    for n in range(4, x + 1, 2):
        if not any(n - p in pset for p in primes if p < n):
            direct.append(n)
    assert exc == direct


def test_export_csv(tmp_path, seq_sqrt2, seq_sqrt3, seq_sqrt5):
    seqs = [seq_sqrt2, seq_sqrt3, seq_sqrt5]
    table = count_all_upto(200, seqs, "weighted")
    out = tmp_path / "table.csv"
    export_table_csv(table, [make_sqrt(2), make_sqrt(3), make_sqrt(5)], out, ns=range(100, 200))
    lines = out.read_text().splitlines()
    assert lines[0] == "n,value,main_term,ratio"
    assert len(lines) == 101
