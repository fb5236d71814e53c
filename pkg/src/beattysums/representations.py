"""Counting ordered representations n = p_1 + ... + p_k with Beatty-prime parts.

The central quantity is the (optionally log-weighted) number of ordered
k-tuples of primes summing to n with p_i constrained to the i-th Beatty
sequence.  Two independent computation routes exist on purpose:

  * ``count_exact`` enumerates tuples directly (outer coordinates looped,
    innermost pair vectorised) -- the oracle;
  * ``count_all_upto`` builds the whole table with k-1 sequence convolutions:
    an FFT product in weighted mode, and an exact integer convolution via
    Kronecker substitution (big-integer block multiplication) in unweighted
    mode, so oracle agreement can be asserted bit-for-bit.

Counts are over *ordered* tuples throughout; unordered counts differ by
multinomial factors.

``smoothed_sandwich`` evaluates the companion sums R-(n) <= R(n) <= R+(n)
obtained by replacing the sharp membership indicator with the smooth
minorant/majorant.  All three sums share one term order and the weight
arrays are pointwise ordered by construction, so the sandwich survives
floating-point summation exactly, not just up to rounding.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .beatty import BeattySequence
from .errors import LimitTooLarge
from .primes import PrimeTable, log_weight_array, sieve
from .singular import main_term
from .smoothing import build as build_smoothed

__all__ = [
    "RepresentationTable",
    "Workspace",
    "count_exact",
    "count_all_upto",
    "brute_force_table",
    "smoothed_count",
    "smoothed_sandwich",
    "SmoothedWorkspace",
    "exceptional_scan",
    "export_table_csv",
]

DEFAULT_TABLE_LIMIT = 4_000_000
_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class RepresentationTable:
    x: int
    k: int
    sequences: tuple
    mode: str  # 'weighted' | 'unweighted'
    values: np.ndarray = field(repr=False)  # index n in [0, x]; meaningful for n >= 2
    roundoff_bound: float = 0.0

    def value(self, n: int):
        if not (2 <= n <= self.x):
            raise ValueError("n outside table range")
        v = self.values[n]
        return float(v) if self.mode == "weighted" else int(v)


@dataclass
class Workspace:
    """Shared per-sequence arrays for repeated exact counts up to a limit."""

    limit: int
    table: PrimeTable
    masks: list  # bool arrays over [0, limit]: prime and member
    weights: np.ndarray  # log p at primes, else 0

    @staticmethod
    def build(sequences, limit: int, table: PrimeTable | None = None) -> "Workspace":
        if table is None or table.limit < limit:
            table = sieve(max(limit, 16))
        masks = [B.prime_mask(limit, table) for B in sequences]
        return Workspace(limit, table, masks, log_weight_array(table, limit))


def count_exact(n: int, sequences, mode: str = "unweighted", workspace: Workspace | None = None):
    """Ordered representation count of n by direct enumeration (the oracle).

    Outer prime coordinates are looped in Python with early pruning; the last
    two coordinates collapse into one vectorised pass.  Returns an int in
    unweighted mode, a float in weighted mode.
    """
    k = len(sequences)
    if k < 2:
        raise ValueError("need at least two sequences")
    if mode not in ("weighted", "unweighted"):
        raise ValueError("mode must be 'weighted' or 'unweighted'")
    if n < 2 * k:
        return 0.0 if mode == "weighted" else 0
    ws = workspace if workspace is not None and workspace.limit >= n else Workspace.build(sequences, n)

    def arrays(i):
        mask = ws.masks[i]
        if mode == "weighted":
            return ws.weights * mask
        return mask.astype(np.int64)

    last = arrays(k - 1)
    second_last_primes = np.flatnonzero(ws.masks[k - 2])
    second_last_w = (
        ws.weights[second_last_primes] if mode == "weighted" else np.ones(len(second_last_primes), dtype=np.int64)
    )

    def inner_pair(budget: int):
        # sum over p in B_{k-1}, q = budget - p in B_k
        sel = second_last_primes <= budget - 2
        ps = second_last_primes[sel]
        if len(ps) == 0:
            return 0.0 if mode == "weighted" else 0
        contrib = last[budget - ps]
        if mode == "weighted":
            return float(np.dot(second_last_w[sel], contrib))
        return int(np.dot(second_last_w[sel], contrib))

    if k == 2:
        return inner_pair(n)

    outer_lists = [np.flatnonzero(ws.masks[i]) for i in range(k - 2)]
    total = 0.0 if mode == "weighted" else 0

    def recurse(depth: int, budget: int, factor):
        nonlocal total
        remaining = k - depth  # coordinates still to place
        if depth == k - 2:
            total += factor * inner_pair(budget)
            return
        plist = outer_lists[depth]
        for p in plist[plist <= budget - 2 * (remaining - 1)]:
            f = factor * (ws.weights[p] if mode == "weighted" else 1)
            recurse(depth + 1, budget - int(p), f)

    recurse(0, n, 1.0 if mode == "weighted" else 1)
    return total


def brute_force_table(x: int, sequences, mode: str = "unweighted", threads: int = 1) -> RepresentationTable:
    """RepresentationTable filled by count_exact for every n in [2, x]."""
    ws = Workspace.build(sequences, x)
    dtype = np.float64 if mode == "weighted" else np.int64
    values = np.zeros(x + 1, dtype=dtype)
    ns = range(2, x + 1)
    if threads > 1:
        from concurrent.futures import ProcessPoolExecutor

        chunks = np.array_split(np.asarray(ns), threads * 4)
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(_brute_chunk, [int(c[0]), int(c[-1])], sequences, mode, x)
                for c in chunks
                if len(c)
            ]
            for fut in futures:
                lo, vals = fut.result()
                values[lo : lo + len(vals)] = vals
    else:
        for n in ns:
            values[n] = count_exact(n, sequences, mode, workspace=ws)
    return RepresentationTable(x, len(sequences), tuple(sequences), mode, values)


def _brute_chunk(bounds, sequences, mode, limit):
    lo, hi = bounds
    ws = Workspace.build(sequences, limit)
    dtype = np.float64 if mode == "weighted" else np.int64
    vals = np.zeros(hi - lo + 1, dtype=dtype)
    for n in range(lo, hi + 1):
        vals[n - lo] = count_exact(n, sequences, mode, workspace=ws)
    return lo, vals


# ---------------------------------------------------------------------------
# fast whole-table computation
# ---------------------------------------------------------------------------


def _kronecker_convolve(a: np.ndarray, b: np.ndarray, out_len: int, slot_bytes: int = 8) -> np.ndarray:
    """Exact convolution of nonnegative int64 arrays via one big multiplication.

    Arrays are packed into little-endian fixed-width slots of a Python int;
    integer multiplication then performs every slot product and carry-free
    addition at once, provided no slot overflows -- the caller guarantees a
    bound on the output values.
    """

    def pack(arr):
        v = arr.astype(np.uint64)
        buf = np.zeros((len(arr), slot_bytes), dtype=np.uint8)
        for j in range(slot_bytes):
            buf[:, j] = (v >> np.uint64(8 * j)).astype(np.uint8)
        return int.from_bytes(buf.tobytes(), "little")

    prod = pack(a) * pack(b)
    raw = prod.to_bytes(len(a) * slot_bytes + len(b) * slot_bytes + slot_bytes, "little")
    n_out = min(out_len, len(a) + len(b) - 1)
    mat = np.frombuffer(raw[: n_out * slot_bytes], dtype=np.uint8).reshape(n_out, slot_bytes)
    out = np.zeros(n_out, dtype=np.uint64)
    for j in range(slot_bytes):
        out |= mat[:, j].astype(np.uint64) << np.uint64(8 * j)
    return out.astype(np.int64)


def count_all_upto(
    x: int,
    sequences,
    mode: str = "unweighted",
    table: PrimeTable | None = None,
    max_limit: int = DEFAULT_TABLE_LIMIT,
) -> RepresentationTable:
    """Whole representation table for n in [2, x] via k-1 convolutions.

    Weighted mode: double-precision FFT convolution (padded to a power of
    two covering k*(x+1), so no cyclic wrap reaches n <= x), with an explicit
    round-off budget recorded on the table.  Unweighted mode: exact integer
    convolution by Kronecker substitution, so the table matches the oracle
    exactly.
    """
    k = len(sequences)
    if k < 2:
        raise ValueError("need at least two sequences")
    if x < 2 * k:
        raise ValueError("x must be at least 2k")
    if x > max_limit:
        raise LimitTooLarge(f"table limit {x} exceeds bound {max_limit}")
    ws = Workspace.build(sequences, x, table)

    if mode == "weighted":
        n_fft = 1 << int(math.ceil(math.log2(k * (x + 1))))
        acc = None
        for i in range(k):
            f = np.fft.rfft(ws.weights * ws.masks[i], n_fft)
            acc = f if acc is None else acc * f
        full = np.fft.irfft(acc, n_fft)
        values = full[: x + 1].copy()
        values[:2] = 0.0
        bound = k * x * _EPS * float(np.max(np.abs(values)) + 1.0)
        return RepresentationTable(x, k, tuple(sequences), mode, values, roundoff_bound=bound)

    if mode != "unweighted":
        raise ValueError("mode must be 'weighted' or 'unweighted'")
    n_primes = int(np.sum(ws.table.is_prime[: x + 1]))
    if (n_primes + 1) ** (k - 1) >= 2**62:
        raise LimitTooLarge("unweighted counts would overflow 8-byte slots")
    acc = ws.masks[0].astype(np.int64)
    for i in range(1, k):
        acc = _kronecker_convolve(acc, ws.masks[i].astype(np.int64), x + 1)
    values = np.zeros(x + 1, dtype=np.int64)
    values[: len(acc)] = acc
    values[:2] = 0
    return RepresentationTable(x, k, tuple(sequences), mode, values)


# ---------------------------------------------------------------------------
# smoothed companions
# ---------------------------------------------------------------------------


@dataclass
class SmoothedWorkspace:
    """Per-sequence weight arrays for the sharp count and both smoothed sums.

    For each sequence the arrays satisfy, entry by entry,

        w_minus[p] <= w_sharp[p] <= w_plus[p]

    exactly in double precision: members get g+ = 1 on their certified
    fractional parts, non-members get g- = 0, and both smooth values always
    lie in [0, 1].  Pointwise ordering plus a shared summation order makes
    the sandwich inequality exact for the computed sums.
    """

    limit: int
    table: PrimeTable
    delta: float
    primes: np.ndarray
    w_minus: list  # full arrays over [0, limit], one per sequence
    w_sharp: list
    w_plus: list

    @staticmethod
    def build(sequences, limit: int, delta: float, table: PrimeTable | None = None) -> "SmoothedWorkspace":
        if table is None or table.limit < limit:
            table = sieve(max(limit, 16))
        primes = table.primes[table.primes <= limit]
        logs = np.log(primes.astype(np.float64))
        w_minus, w_sharp, w_plus = [], [], []
        for B in sequences:
            gamma = B.density()
            g_plus = build_smoothed(gamma, delta, +1)
            g_minus = build_smoothed(gamma, delta, -1)
            member, fracs = B.membership_table(primes)
            vp = g_plus.eval_array(fracs)
            vm = g_minus.eval_array(fracs)
            # certified consistency: the smooth values must sandwich the
            # indicator at the very same evaluation points
            assert np.all(vp[member] == 1.0) and np.all(vm[~member] == 0.0)
            assert np.all(vm <= member) and np.all(member <= vp)
            for values, dest in ((logs * vm, w_minus), (logs * member, w_sharp), (logs * vp, w_plus)):
                full = np.zeros(limit + 1, dtype=np.float64)
                full[primes] = values
                dest.append(full)
        return SmoothedWorkspace(limit, table, delta, primes, w_minus, w_sharp, w_plus)


def _tuple_sum(n: int, full, primes: np.ndarray) -> float:
    """Sum over ordered prime tuples summing to n of the product of weights.

    ``full`` holds one weight array over [0, limit] per coordinate; the term
    order depends only on n and the prime list, never on the weights, so runs
    with pointwise-ordered weights produce ordered results.
    """
    k = len(full)
    if n < 2 * k:
        return 0.0

    def inner(budget):
        ps = primes[primes <= budget - 2]
        if len(ps) == 0:
            return 0.0
        return float(np.dot(full[k - 2][ps], full[k - 1][budget - ps]))

    if k == 2:
        return inner(n)

    total = 0.0

    def recurse(depth, budget, factor):
        nonlocal total
        if depth == k - 2:
            total += factor * inner(budget)
            return
        remaining = k - depth
        for p in primes[primes <= budget - 2 * (remaining - 1)]:
            recurse(depth + 1, budget - int(p), factor * full[depth][p])

    recurse(0, n, 1.0)
    return total


def smoothed_sandwich(n: int, sequences, delta: float, workspace: SmoothedWorkspace | None = None):
    """(R-, R, R+) at n, computed with one shared term order.

    The returned floats satisfy R- <= R <= R+ exactly: the per-term weights
    are pointwise ordered and floating-point addition of identically ordered
    term sequences is monotone.
    """
    ws = workspace
    if ws is None or ws.limit < n or ws.delta != delta:
        ws = SmoothedWorkspace.build(sequences, n, delta)
    minus = _tuple_sum(n, ws.w_minus, ws.primes)
    sharp = _tuple_sum(n, ws.w_sharp, ws.primes)
    plus = _tuple_sum(n, ws.w_plus, ws.primes)
    return minus, sharp, plus


def smoothed_count(n: int, sequences, delta: float, sign, workspace: SmoothedWorkspace | None = None) -> float:
    """R+(n) or R-(n): log-weighted tuple sum with smoothed membership weights."""
    if isinstance(sign, str):
        sign = {"plus": +1, "minus": -1}[sign]
    minus, _, plus = smoothed_sandwich(n, sequences, delta, workspace)
    return plus if sign == +1 else minus


# ---------------------------------------------------------------------------
# exceptional set scan
# ---------------------------------------------------------------------------


def exceptional_scan(x: int, B1: BeattySequence, B2: BeattySequence) -> list[int]:
    """Even n <= x with no representation p1 + p2 = n, p_i in B_i.

    Computed from the exact unweighted table and re-verified entry by entry
    with the direct oracle before being reported.
    """
    if x < 4:
        raise ValueError("x must be >= 4")
    table = count_all_upto(x, [B1, B2], "unweighted")
    evens = np.arange(4, x + 1, 2)
    zeros = evens[table.values[evens] == 0]
    ws = Workspace.build([B1, B2], x, table=None)
    out = []
    for n in zeros:
        n = int(n)
        if count_exact(n, [B1, B2], "unweighted", workspace=ws) != 0:
            raise AssertionError(f"table reported a false exception at n={n}")
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------


def export_table_csv(table: RepresentationTable, alphas, path, ns=None) -> None:
    """CSV rows (n, value, main_term, ratio), 12 significant digits."""
    if ns is None:
        ns = range(2, table.x + 1)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "value", "main_term", "ratio"])
        for n in ns:
            v = table.value(int(n))
            mt = main_term(int(n), table.k, list(alphas))
            ratio = v / mt if mt != 0 else math.nan
            w.writerow([int(n), f"{v:.12g}", f"{mt:.12g}", f"{ratio:.12g}"])
