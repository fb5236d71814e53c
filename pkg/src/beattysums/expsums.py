"""Prime exponential sums, twisted representation sums and Farey dissection.

The basic object is S(xi) = sum_{p <= N} (log p) e(xi p) with
e(t) = exp(2 pi i t).  Everything else layers on top:

  * ``S_grid`` evaluates S on the uniform grid t/T, t = 0..T-1, as one
    discrete Fourier transform of the log-weight mask (T > N keeps every
    prime frequency below the grid order, so the grid values are exact up to
    float rounding);
  * ``R_nm`` is the m-twisted representation sum over ordered prime tuples
    p_1 + ... + p_k = n (no Beatty constraint: the membership structure
    enters only through the smoothing coefficients multiplying these sums);
  * ``fourier_expansion_check`` confirms numerically that the smoothed count
    R+(n) equals its Fourier expansion: the partial sum over |m| <= M plus a
    tail controlled by the measured coefficient decay;
  * ``farey_arcs`` builds the mediant dissection of [1/Q, 1 + 1/Q) of order
    Q, the geometry underlying major/minor arc estimates;
  * ``exp_sum_budget_ratio`` and ``distance_sum_ratio`` measure |S| (resp. the reciprocal
    distance sum) against the shape (N/q + N^{4/5} + q)(1 + q^2 |theta|) log^4
    with the implicit constant taken to be 1 -- ratios are reported, never
    asserted against a specific constant;
  * ``parseval_check`` and ``bessel_check`` exercise the mean-square
    identities the error analysis rests on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import LimitTooLarge
from .primes import PrimeTable, log_weight_array, sieve
from .reals import to_float

__all__ = [
    "S_point",
    "S_grid",
    "ModulationVector",
    "AnalysisParams",
    "R_nm",
    "FourierExpansionReport",
    "fourier_expansion_check",
    "FareyArc",
    "farey_arcs",
    "exp_sum_budget",
    "exp_sum_budget_ratio",
    "distance_sum_ratio",
    "parseval_check",
    "bessel_check",
    "MinorArcRecord",
    "minor_arc_scan",
]

_MAX_GRID = 1 << 26
_MAX_ARCS = 5_000_000


def _weights(N: int, table: PrimeTable | None = None) -> np.ndarray:
    if table is None or table.limit < N:
        table = sieve(max(N, 16))
    return log_weight_array(table, N)


def S_point(xi: float, N: int, table: PrimeTable | None = None) -> complex:
    """S(xi) = sum_{p <= N} (log p) e(xi p)."""
    if N < 2:
        raise ValueError("N must be >= 2")
    if table is None or table.limit < N:
        table = sieve(max(N, 16))
    p = table.primes[table.primes <= N].astype(np.float64)
    w = np.log(p)
    phase = 2.0 * math.pi * ((xi * p) % 1.0)
    return complex(np.dot(w, np.cos(phase)), np.dot(w, np.sin(phase)))


def S_grid(N: int, T: int, table: PrimeTable | None = None) -> np.ndarray:
    """S(t/T) for t = 0..T-1 via one length-T DFT of the log-weight mask."""
    if T < N + 1:
        raise ValueError("grid order T must exceed N")
    if T > _MAX_GRID:
        raise LimitTooLarge(f"grid length {T} exceeds bound {_MAX_GRID}")
    w = np.zeros(T, dtype=np.float64)
    wN = _weights(N, table)
    w[: N + 1] = wN
    # numpy's fft uses e(-nt/T); S uses e(+nt/T), so conjugate
    return np.conj(np.fft.fft(w))


@dataclass(frozen=True)
class ModulationVector:
    """Integer twist vector m with the phase offsets it induces.

    lambdas[j] = gamma_j m_j - gamma_1 m_1, so lambdas[0] = 0 and the twisted
    integrand factors as S(xi) S(xi + lambda_2) ... S(xi + lambda_k).
    """

    m: tuple
    lambdas: tuple

    @staticmethod
    def from_sequences(m, sequences) -> "ModulationVector":
        m = tuple(int(v) for v in m)
        gammas = [B.density() for B in sequences]
        if len(m) != len(gammas):
            raise ValueError("twist vector length must match sequence count")
        lam = tuple(gammas[j] * m[j] - gammas[0] * m[0] for j in range(len(m)))
        return ModulationVector(m, lam)

    @property
    def norm(self) -> int:
        return max(abs(v) for v in self.m)

    def __post_init__(self):
        if self.lambdas and self.lambdas[0] != 0.0:
            raise ValueError("first phase offset must vanish by construction")


@dataclass(frozen=True)
class AnalysisParams:
    """The coupled parameter choices of the error analysis.

    Delta = (log n)^-A, M = Delta^-1 log n, and the Farey order splits
    n = P * Q.  The k >= 3 analysis uses P = (log n)^(2A+12); the two-prime
    mean-square variant uses P = (log x)^(3A+10).
    """

    A: float
    n: int
    delta: float
    M: float
    P: float
    Q: float

    @staticmethod
    def three_prime(A: float, n: int) -> "AnalysisParams":
        L = math.log(n)
        delta = L ** (-A)
        P = L ** (2 * A + 12)
        return AnalysisParams(A, n, delta, L / delta, P, n / P)

    @staticmethod
    def binary(A: float, x: int) -> "AnalysisParams":
        L = math.log(x)
        delta = L ** (-A)
        P = L ** (3 * A + 10)
        return AnalysisParams(A, x, delta, L / delta, P, x / P)


def R_nm(n: int, mvec, sequences, table: PrimeTable | None = None) -> complex:
    """Twisted representation sum over ordered prime tuples summing to n.

    R(n, m) = sum_{p_1+...+p_k=n} (log p_1)...(log p_k) e(gamma_1 m_1 p_1 +
    ... + gamma_k m_k p_k).  At m = 0 this is the plain weighted count over
    all primes.  Membership plays no role here.
    """
    k = len(sequences)
    if n < 2 * k:
        return 0j
    if isinstance(mvec, ModulationVector):
        m = mvec.m
    else:
        m = tuple(int(v) for v in mvec)
    gammas = [B.density() for B in sequences]
    if table is None or table.limit < n:
        table = sieve(max(n, 16))
    primes = table.primes[table.primes <= n - 2 * (k - 1)]
    w = np.zeros(n + 1, dtype=np.float64)
    w[primes] = np.log(primes.astype(np.float64))
    phased = []
    for j in range(k):
        ph = np.zeros(n + 1, dtype=complex)
        ph[primes] = w[primes] * np.exp(2j * math.pi * ((gammas[j] * m[j] * primes) % 1.0))
        phased.append(ph)

    def inner(budget):
        ps = primes[primes <= budget - 2]
        if len(ps) == 0:
            return 0j
        return complex(np.dot(phased[k - 2][ps], phased[k - 1][budget - ps]))

    if k == 2:
        return inner(n)
    total = 0j

    def recurse(depth, budget, factor):
        nonlocal total
        if depth == k - 2:
            total += factor * inner(budget)
            return
        remaining = k - depth
        for p in primes[primes <= budget - 2 * (remaining - 1)]:
            f = phased[depth][p]
            if f != 0:
                recurse(depth + 1, budget - int(p), factor * f)

    recurse(0, n, 1.0 + 0j)
    return total


# ---------------------------------------------------------------------------
# Fourier expansion of the smoothed count
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FourierExpansionReport:
    n: int
    M: int
    smoothed_value: float
    partial_sum: complex
    residual: float
    tail_bound: float

    @property
    def ok(self) -> bool:
        return self.residual <= self.tail_bound


def fourier_expansion_check(
    n: int,
    sequences,
    delta: float,
    M: int,
    table: PrimeTable | None = None,
    strict: bool = True,
) -> FourierExpansionReport:
    """Compare R+(n) against its truncated Fourier expansion (k = 2).

    The partial sum runs over |m_i| <= M; the residual must stay below the
    tail bound R(n,0) * (tail_1 * total_2 + total_1 * tail_2) derived from
    the measured coefficient decay, where tail_i bounds the coefficient mass
    of sequence i beyond M and total_i its full mass.
    """
    from .representations import smoothed_count
    from .smoothing import build as build_smoothed

    k = len(sequences)
    if k != 2:
        raise ValueError("the expansion check is implemented for k = 2")
    if M < 0:
        raise ValueError("M must be nonnegative")
    if table is None or table.limit < n:
        table = sieve(max(n, 16))

    g1 = build_smoothed(sequences[0].density(), delta, +1)
    g2 = build_smoothed(sequences[1].density(), delta, +1)
    d1 = _delta_float(sequences[0])
    d2 = _delta_float(sequences[1])

    coeff1 = g1.coeff_array(M) * np.exp(2j * math.pi * d1 * np.arange(-M, M + 1))
    coeff2 = g2.coeff_array(M) * np.exp(2j * math.pi * d2 * np.arange(-M, M + 1))

    gam1, gam2 = sequences[0].density(), sequences[1].density()
    primes = table.primes[table.primes <= n - 2]
    w = np.log(primes.astype(np.float64))
    comp = (n - primes).astype(np.int64)
    valid = table.is_prime[comp]
    ps = primes[valid]
    qs = comp[valid]
    wp = np.log(ps.astype(np.float64))
    wq = np.log(qs.astype(np.float64))

    ms = np.arange(-M, M + 1)
    # R(n, (m1, m2)) = sum_p W(p) e(gamma1 m1 p) e(gamma2 m2 (n-p)): separable
    A = np.exp(2j * math.pi * np.outer(ms, (gam1 * ps) % 1.0))  # (2M+1, P)
    B = np.exp(2j * math.pi * np.outer((gam2 * qs) % 1.0, ms))  # (P, 2M+1)
    R_matrix = (A * (wp * wq)[None, :]) @ B  # (2M+1, 2M+1): rows m1, cols m2

    partial = complex(np.sum(coeff1[:, None] * coeff2[None, :] * R_matrix))
    smoothed = smoothed_count(n, sequences, delta, +1)
    residual = abs(smoothed - partial)

    r_zero = float(np.dot(wp, wq))  # R(n, 0): plain weighted count
    tail1 = g1.coeff_tail_bound(M)
    tail2 = g2.coeff_tail_bound(M)
    total1 = g1.coeff_abs_sum(M) + tail1
    total2 = g2.coeff_abs_sum(M) + tail2
    bound = r_zero * (tail1 * total2 + total1 * tail2)

    report = FourierExpansionReport(n, M, smoothed, partial, residual, bound)
    if strict and not report.ok:
        raise AssertionError(
            f"Fourier expansion residual {residual:.3e} exceeds tail bound {bound:.3e} at n={n}"
        )
    return report


def _delta_float(B) -> float:
    return to_float(B.delta)


# ---------------------------------------------------------------------------
# Farey dissection
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FareyArc:
    a: int
    q: int
    lo: Fraction
    hi: Fraction

    def center(self) -> Fraction:
        return Fraction(self.a, self.q)

    def __post_init__(self):
        if math.gcd(self.a, self.q) != 1:
            raise ValueError("arc center must be in lowest terms")
        if not (self.lo <= Fraction(self.a, self.q) <= self.hi):
            raise ValueError("arc does not contain its center")


def farey_arcs(Q: int, max_arcs: int = _MAX_ARCS) -> list[FareyArc]:
    """Mediant dissection of [1/Q, 1 + 1/Q) around Farey fractions of order Q.

    The arc of a/q runs from its mediant with the previous fraction to its
    mediant with the next; the first arc starts exactly at 1/Q and the arc of
    1/1 extends to 1 + 1/Q, which is where the next period's first arc would
    begin.  Arcs partition the interval exactly.
    """
    if not (2 <= Q <= 10**5):
        raise ValueError("Q must lie in [2, 10^5]")
    est = int(0.304 * Q * Q) + 10
    if est > max_arcs:
        raise LimitTooLarge(f"order {Q} needs ~{est} arcs, beyond bound {max_arcs}")
    # Farey neighbours via the standard next-term recurrence, from 1/Q to 1/1
    fractions = []
    a, b, c, d = 0, 1, 1, Q
    while True:
        k = (Q + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        fractions.append((a, b))
        if (a, b) == (1, 1):
            break
    arcs: list[FareyArc] = []
    lo = Fraction(1, Q)
    for i, (p, q) in enumerate(fractions):
        if i + 1 < len(fractions):
            p2, q2 = fractions[i + 1]
            hi = Fraction(p + p2, q + q2)
        else:
            hi = 1 + Fraction(1, Q)
        arcs.append(FareyArc(p, q, lo, hi))
        lo = hi
    return arcs


# ---------------------------------------------------------------------------
# measured analytic inequalities
# ---------------------------------------------------------------------------


def exp_sum_budget(N: int, q: int, theta: float) -> float:
    """(N/q + N^{4/5} + q)(1 + q^2 |theta|) log(2N)^4, implicit constant 1."""
    return (N / q + N**0.8 + q) * (1.0 + q * q * abs(theta)) * math.log(2 * N) ** 4


def exp_sum_budget_ratio(N: int, xi: float, a: int, q: int, table: PrimeTable | None = None) -> float:
    """|S(xi)| divided by the prime-sum budget at the approximation a/q."""
    if math.gcd(abs(a) if a else 1, q) != 1 or q > N:
        raise ValueError("need gcd(a, q) = 1 and q <= N")
    theta = xi - a / q
    return abs(S_point(xi, N, table)) / exp_sum_budget(N, q, theta)


def distance_sum_ratio(X: int, Y: float, alpha: float, a: int, q: int) -> float:
    """Measured / budget for the reciprocal-distance sum.

    LHS = sum_{x <= X} min(X Y / x, ||alpha x||^{-1}); budget
    (X Y / q + X + q)(1 + q^2 |theta|) log(2 X q) with constant 1.
    """
    if math.gcd(abs(a) if a else 1, q) != 1:
        raise ValueError("need gcd(a, q) = 1")
    xs = np.arange(1, X + 1, dtype=np.float64)
    f = np.mod(alpha * xs, 1.0)
    dist = np.minimum(f, 1.0 - f)
    dist = np.maximum(dist, 1e-300)
    lhs = float(np.sum(np.minimum(X * Y / xs, 1.0 / dist)))
    theta = alpha - a / q
    rhs = (X * Y / q + X + q) * (1.0 + q * q * abs(theta)) * math.log(2 * X * q)
    return lhs / rhs


def parseval_check(N: int, T: int, table: PrimeTable | None = None) -> float:
    """Relative residual of (1/T) sum_t |S(t/T)|^2 = sum_{p<=N} (log p)^2.

    Exact in exact arithmetic whenever T > N; the return value is the
    floating-point discrepancy, which measures transform round-off only.
    """
    grid = S_grid(N, T, table)
    lhs = float(np.sum(np.abs(grid) ** 2)) / T
    w = _weights(N, table)
    rhs = float(np.dot(w, w))
    return abs(lhs - rhs) / rhs


def bessel_check(x: int, mvec, sequences, table: PrimeTable | None = None) -> tuple[float, float]:
    """(sum_{n<=x} |R(n,m)|^2, discretised mean square of |S1 S2|^2), k = 2.

    Bessel's inequality makes the first at most the second; the grid order is
    the first power of two beyond 2x, so the product's frequencies (prime
    pairs sum to at most 2x) all sit below the grid order and discretisation
    is exact up to rounding.
    """
    if len(sequences) != 2:
        raise ValueError("the mean-square check is implemented for k = 2")
    if table is None or table.limit < x:
        table = sieve(max(x, 16))
    mv = mvec if isinstance(mvec, ModulationVector) else ModulationVector.from_sequences(mvec, sequences)
    gam = [B.density() for B in sequences]
    lhs = 0.0
    for n in range(4, x + 1):
        lhs += abs(R_nm(n, mv, sequences, table)) ** 2

    T = 1 << int(math.ceil(math.log2(2 * x + 2)))
    w = np.zeros(T, dtype=np.float64)
    wN = _weights(x, table)
    w[: x + 1] = wN
    ns = np.arange(T)
    rhs_grid = np.ones(T, dtype=complex)
    for j in range(2):
        shift = gam[j] * mv.m[j]
        modulated = w * np.exp(2j * math.pi * ((shift * ns) % 1.0))
        rhs_grid *= np.conj(np.fft.fft(modulated))
    rhs = float(np.sum(np.abs(rhs_grid) ** 2)) / T
    return lhs, rhs


# ---------------------------------------------------------------------------
# minor-arc scan
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinorArcRecord:
    label: str
    multiplier: int
    a: int
    q: int
    xi: float
    abs_S: float
    ratio: float  # |S(xi)| / S(0)
    rhs_ratio: float  # |S(xi)| / budget from exp_sum_budget


def minor_arc_scan(
    N: int,
    exprs,
    labels=None,
    multipliers=range(1, 6),
    q_window: tuple[float, float] = (0.1, 0.5),
    epsilon: float = 0.1,
    table: PrimeTable | None = None,
) -> list[MinorArcRecord]:
    """|S| at irrational points whose certified denominators sit in a window.

    For each base value theta and multiplier m, the scan takes xi = {m*theta},
    certifies a rational approximation a/q via consecutive convergents at a
    ladder of Q values, keeps the cases with q in [N^w_lo, N^w_hi], and
    records |S(xi)| against both S(0) and the measured budget.  These xi are
    exactly the phase shifts the twisted sums see, and the dip of |S| there
    is the computable shadow of the minor-arc estimates.
    """
    from .diophantine import convergent_approx, linear_form

    if table is None or table.limit < N:
        table = sieve(max(N, 16))
    if labels is None:
        labels = [f"theta{i}" for i in range(len(exprs))]
    q_lo = N ** q_window[0]
    q_hi = N ** q_window[1]
    s0 = abs(S_point(0.0, N, table))
    out: list[MinorArcRecord] = []
    seen = set()
    for label, base in zip(labels, exprs):
        for mult in multipliers:
            combo = linear_form([mult], [base])
            if combo.is_rational():
                continue
            Q = max(int(q_hi) + 1, 16)
            while Q >= 16:
                appr = convergent_approx(combo, Q, epsilon)
                if q_lo <= appr.q <= q_hi:
                    key = (label, mult, appr.a, appr.q)
                    if key not in seen:
                        seen.add(key)
                        xi = to_float(combo) % 1.0
                        sval = abs(S_point(xi, N, table))
                        theta = xi - (appr.a % appr.q) / appr.q
                        # reduce a mod q for the budget; |S| is 1-periodic
                        rhs = exp_sum_budget(N, appr.q, theta)
                        out.append(
                            MinorArcRecord(
                                label, mult, appr.a, appr.q, xi, sval, sval / s0, sval / rhs
                            )
                        )
                if appr.q <= q_lo:
                    break
                Q = Q // 4
    return out
