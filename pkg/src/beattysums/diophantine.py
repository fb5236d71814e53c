"""Continued fractions, rational approximation and irrationality-type scans.

The Gauss map x -> 1/(x - floor(x)) runs entirely in exact arithmetic: the
symbolic real families are closed under integer shifts and reciprocals, and
floors are decided by interval evaluation with precision escalation.  Linear
combinations m_1*theta_1 + ... + m_s*theta_s of quadratic surds leave the
single-surd family, so this module carries ``RadicalSum``: an element

    c_0 + sum_j c_j * sqrt(d_j)      (c_j rational, d_j distinct squarefree)

of a multiquadratic field.  Such sums multiply via radical reduction
(sqrt(m)*sqrt(m') = s*sqrt(d0) with m*m' = s^2*d0) and invert by conjugating
one prime radical at a time, which keeps the Gauss map exact even for inputs
like 1/sqrt(2) - 1/sqrt(3).  Distinct square roots of squarefree integers are
linearly independent over the rationals, so rationality of a RadicalSum is
decidable by inspection -- the property that makes degenerate integer
combinations detectable instead of silently catastrophic.

The type scans measure, over a lattice box, how small ||m . theta|| gets
relative to |m| = max |m_i|: ``power`` mode records -log||m.theta|| / log|m|
(the exponent eta in the threshold |m|^-eta), ``subexponential`` mode records
log(-log||m.theta||) / log|m| (the eta in exp(-|m|^eta)).  Small denominators
produce harmless spikes in these finite-scale statistics, so the headline
``max_exponent`` is taken over a tail window |m| >= window_min.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

import numpy as np

from .errors import NotRepresentable, ValidationError, ZeroVector
from .reals import (
    MobiusExpr,
    QuadraticExpr,
    RealExpr,
    decide_floor,
    float_down,
    float_up,
    frac_interval,
    refine_enclosure,
    squarefree_decompose,
    to_float,
)

__all__ = [
    "RadicalSum",
    "ContinuedFraction",
    "RationalApprox",
    "TypeScanReport",
    "linear_form",
    "continued_fraction",
    "quadratic_cf_period",
    "convergent_approx",
    "certified_distance_to_integers",
    "type_scan",
]


# ---------------------------------------------------------------------------
# multiquadratic field elements
# ---------------------------------------------------------------------------


class RadicalSum(RealExpr):
    """c0 + sum c_j sqrt(d_j) with distinct squarefree d_j >= 2, exact."""

    __slots__ = ("const", "terms")

    def __init__(self, const=0, terms: dict | None = None):
        self.const = Fraction(const)
        clean = {}
        for d, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                s, d0 = squarefree_decompose(int(d))
                if d0 == 1:
                    self.const += c * s
                else:
                    clean[d0] = clean.get(d0, Fraction(0)) + c * s
        self.terms = {d: c for d, c in clean.items() if c != 0}

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def from_expr(expr) -> "RadicalSum":
        if isinstance(expr, RadicalSum):
            return expr
        if expr.is_rational():
            return RadicalSum(expr.as_fraction())
        if isinstance(expr, QuadraticExpr):
            return RadicalSum(
                Fraction(expr.a, expr.c), {expr.d: Fraction(expr.b, expr.c)}
            )
        raise NotRepresentable(f"{expr!r} is not an algebraic value of the supported form")

    # -- classification ---------------------------------------------------------

    def is_rational(self):
        return not self.terms

    def as_fraction(self):
        if self.terms:
            raise ValueError("irrational RadicalSum")
        return self.const

    def is_zero(self):
        return not self.terms and self.const == 0

    @property
    def kind(self):
        return "algebraic combination"

    # -- ring operations ---------------------------------------------------------

    def affine(self, scale, shift):
        p, q = Fraction(scale), Fraction(shift)
        if p == 0:
            return RadicalSum(q)
        return RadicalSum(p * self.const + q, {d: p * c for d, c in self.terms.items()})

    def __add__(self, other):
        other = RadicalSum.from_expr(other) if isinstance(other, RealExpr) else RadicalSum(other)
        terms = dict(self.terms)
        for d, c in other.terms.items():
            terms[d] = terms.get(d, Fraction(0)) + c
        return RadicalSum(self.const + other.const, terms)

    __radd__ = __add__

    def __neg__(self):
        return self.affine(-1, 0)

    def __sub__(self, other):
        other = RadicalSum.from_expr(other) if isinstance(other, RealExpr) else RadicalSum(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.affine(other, 0)
        other = RadicalSum.from_expr(other)
        out_const = self.const * other.const
        out_terms: dict[int, Fraction] = {}

        def add_term(d, c):
            nonlocal out_const
            if d == 1:
                out_const += c
            else:
                out_terms[d] = out_terms.get(d, Fraction(0)) + c

        for d, c in self.terms.items():
            add_term(d, c * other.const)
        for d, c in other.terms.items():
            add_term(d, c * self.const)
        for d1, c1 in self.terms.items():
            for d2, c2 in other.terms.items():
                s, d0 = squarefree_decompose(d1 * d2)
                add_term(d0, c1 * c2 * s)
        return RadicalSum(out_const, out_terms)

    __rmul__ = __mul__

    def reciprocal(self):
        """Exact inverse by conjugating one prime radical at a time."""
        if self.is_zero():
            raise ZeroDivisionError("reciprocal of zero")
        if not self.terms:
            return RadicalSum(1 / self.const)
        # pick a prime dividing some radicand and split x = u + sqrt(P) * w
        p = None
        for d in self.terms:
            f = 2
            dd = d
            while f * f <= dd:
                if dd % f == 0:
                    p = f
                    break
                f += 1
            else:
                p = dd
            if p:
                break
        u_terms, w_terms = {}, {}
        u_const, w_const = self.const, Fraction(0)
        for d, c in self.terms.items():
            if d % p == 0:
                rem = d // p
                if rem == 1:
                    w_const += c
                else:
                    w_terms[rem] = c
            else:
                u_terms[d] = c
        u = RadicalSum(u_const, u_terms)
        w = RadicalSum(w_const, w_terms)
        # 1/(u + sqrt(P) w) = (u - sqrt(P) w) / (u^2 - P w^2); the denominator
        # lives in the subfield without sqrt(P) and is nonzero because sqrt(P)
        # does not belong to that subfield
        denom = u * u - (w * w).affine(p, 0)
        inv_denom = denom.reciprocal()
        minus_sqrtp_w = RadicalSum(0, {p: Fraction(1)}) * w
        return (u - minus_sqrtp_w) * inv_denom

    # -- interval evaluation ---------------------------------------------------------

    def _refine(self, work_bits):
        g = work_bits
        lo = hi = self.const
        for d, c in self.terms.items():
            r = isqrt(d << (2 * g))
            s_lo = Fraction(r, 1 << g)
            s_hi = Fraction(r + 1, 1 << g)
            if c >= 0:
                lo += c * s_lo
                hi += c * s_hi
            else:
                lo += c * s_hi
                hi += c * s_lo
        return (lo, hi)

    def __repr__(self):
        parts = [str(self.const)] if self.const or not self.terms else []
        for d in sorted(self.terms):
            parts.append(f"({self.terms[d]})*sqrt({d})")
        return " + ".join(parts)

    def __eq__(self, other):
        if not isinstance(other, RadicalSum):
            return NotImplemented
        return self.const == other.const and self.terms == other.terms

    def __hash__(self):
        return hash((self.const, tuple(sorted(self.terms.items()))))


def linear_form(m, thetas) -> RealExpr:
    """Exact evaluable for m_1*theta_1 + ... + m_s*theta_s.

    Algebraic inputs combine into a RadicalSum; a single transcendental input
    (with every other theta rational) stays in the Moebius family.  Mixing a
    transcendental base with irrational algebraic values, or two different
    transcendental bases, has no exact representative here and is refused.
    A rational result is returned as such -- callers that need irrationality
    must reject it.
    """
    m = [int(v) for v in m]
    if len(m) != len(thetas):
        raise ValueError("coefficient vector and theta list differ in length")
    if all(v == 0 for v in m):
        raise ZeroVector("the zero vector never witnesses an approximation")
    transcendental = [
        (c, t) for c, t in zip(m, thetas) if isinstance(t, MobiusExpr) and c != 0
    ]
    if not transcendental:
        acc = RadicalSum(0)
        for c, t in zip(m, thetas):
            if c != 0:
                acc = acc + RadicalSum.from_expr(t).affine(c, 0)
        return acc
    if len(transcendental) > 1:
        raise NotRepresentable(
            "combinations with more than one transcendental constant are unsupported"
        )
    rest = Fraction(0)
    for c, t in zip(m, thetas):
        if c == 0 or isinstance(t, MobiusExpr):
            continue
        if not t.is_rational():
            raise NotRepresentable(
                "cannot mix a transcendental constant with irrational algebraic values"
            )
        rest += c * t.as_fraction()
    c, t = transcendental[0]
    return t.affine(c, rest)


# ---------------------------------------------------------------------------
# continued fractions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ContinuedFraction:
    theta: object
    partial_quotients: list[int]
    convergents: list[tuple[int, int]]  # (p_j, q_j), q strictly increasing from j>=1


def continued_fraction(theta, q_limit: int) -> ContinuedFraction:
    """Expand theta until a convergent denominator exceeds q_limit.

    Returns every convergent with q_j <= q_limit plus the first one beyond
    it.  The expansion is the exact Gauss map; partial quotients come from
    interval floors with precision escalation, so they are never guesses.
    """
    if theta.is_rational():
        raise ValidationError("continued_fraction expects an irrational value")
    if q_limit < 1:
        raise ValueError("q_limit must be >= 1")
    a = decide_floor(theta)
    quotients = [a]
    p_prev, q_prev = 1, 0
    p_cur, q_cur = a, 1
    convergents = [(p_cur, q_cur)]
    cur = theta
    while q_cur <= q_limit:
        cur = (cur - a).reciprocal()
        a = decide_floor(cur)
        quotients.append(a)
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        det = p_cur * q_prev - p_prev * q_cur
        assert det in (1, -1), "convergent recurrence lost unimodularity"
        convergents.append((p_cur, q_cur))
    return ContinuedFraction(theta, quotients, convergents)


def quadratic_cf_period(expr: QuadraticExpr, max_steps: int = 10_000):
    """(preperiod, period) of the partial quotients of a quadratic surd.

    Runs the integer surd recurrence on states (P, Q) with x = (P + sqrt(D))/Q
    and detects the first repeated state; eventual periodicity is guaranteed
    for quadratic irrationals.
    """
    from .reals import quadratic_floor_exact

    a, b, c, d = expr.a, expr.b, expr.c, expr.d
    if b < 0:
        a, c, b = -a, -c, -b
    # x = (a + sqrt(b^2 d))/c; rescale so that c divides D - a^2
    P, Q, D = a, c, b * b * d
    if (D - P * P) % Q != 0:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    seen: dict[tuple[int, int], int] = {}
    quotients: list[int] = []
    for step in range(max_steps):
        key = (P, Q)
        if key in seen:
            start = seen[key]
            return quotients[:start], quotients[start:]
        seen[key] = step
        aj = quadratic_floor_exact(P, 1, Q, D)
        quotients.append(aj)
        P = aj * Q - P
        Q = (D - P * P) // Q
    raise RuntimeError("no period found within max_steps")


# ---------------------------------------------------------------------------
# rational approximation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RationalApprox:
    a: int
    q: int
    residual_bound: float  # certified upper bound on |q*theta - a|
    meets_lower_bound: bool  # q >= Q^epsilon (diagnostic flag, not an error)

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("denominator must be positive")
        if gcd(abs(self.a), self.q) != 1:
            raise ValueError("approximation must be in lowest terms")


def _certified_abs_bound(expr, upper: float) -> float:
    """Certified bound on |expr| at least as small as `upper` if possible."""
    bits = 64
    while True:
        lo, hi = refine_enclosure(expr, bits)
        bound = float_up(max(abs(lo), abs(hi)))
        if bound <= upper or bits >= 1 << 16:
            return bound
        bits *= 2


def convergent_approx(combo, Q: int, epsilon: float) -> RationalApprox:
    """Best rational a/q with q <= Q from consecutive convergents.

    Picks the convergent pair q <= Q < q'; continued-fraction theory then
    gives |q*combo - a| < 1/q' < 1/Q unconditionally, and the bound is
    re-certified here by interval arithmetic.  ``meets_lower_bound`` flags
    whether q >= Q^epsilon held -- the finite-type heuristic says it should
    for small epsilon, but a failure is reported rather than raised.
    """
    if not (0 < epsilon < 0.5):
        raise ValueError("epsilon must lie in (0, 1/2)")
    if Q < 16:
        raise ValueError("Q must be >= 16")
    if combo.is_rational():
        raise ValidationError("combination is rational; no Diophantine certificate")
    cf = continued_fraction(combo, Q)
    below = [(p, q) for p, q in cf.convergents if q <= Q]
    a, q = below[-1]
    g = gcd(abs(a), q)
    a, q = a // g, q // g  # convergents are already coprime; stay safe
    residual = combo.affine(q, -a)
    bound = _certified_abs_bound(residual, 1.0 / Q)
    if bound > 1.0 / Q:
        raise AssertionError("convergent residual failed its certified bound")
    return RationalApprox(a, q, bound, meets_lower_bound=q >= Q**epsilon)


# ---------------------------------------------------------------------------
# type scans
# ---------------------------------------------------------------------------


def certified_distance_to_integers(expr, bits: int = 96) -> tuple[float, float]:
    """Certified [lo, hi] enclosure of ||expr|| (distance to nearest integer).

    Endpoints are rounded outward when converting to doubles so the returned
    floats genuinely bracket the exact distance.
    """
    b = bits
    while True:
        iv = expr.eval(b)
        fr = frac_interval(iv)
        if fr is not None:
            x_lo, x_hi = fr.lo, fr.hi
            d_lo = float_down(min(x_lo, 1 - x_hi))
            d_hi = float_up(min(x_hi, 1 - x_lo))
            if x_lo <= Fraction(1, 2) <= x_hi:
                d_hi = 0.5
            return max(d_lo, 0.0), max(d_hi, 0.0)
        b *= 2


@dataclass
class TypeScanReport:
    thetas: list
    q_max: int
    mode: str  # 'power' | 'subexponential'
    window_min: int
    records: list = field(default_factory=list)  # running maxima rows
    max_exponent: float = float("nan")  # over the tail window, certified
    n_points: int = 0

    def to_rows(self):
        return [
            {"m": r["m"], "distance": r["distance"], "exponent": r["exponent"]}
            for r in self.records
        ]


def _exponent(dist: float, m_norm: int, mode: str) -> float:
    if m_norm < 2 or dist <= 0:
        return float("nan")
    if mode == "power":
        return -math.log(dist) / math.log(m_norm)
    return math.log(-math.log(dist)) / math.log(m_norm)


def type_scan(thetas, q_max: int, mode: str = "power", window_min: int | None = None) -> TypeScanReport:
    """Scan ||m . theta|| over the lattice box 0 < |m| <= q_max.

    A float64 sweep locates candidate records; every reported record (and the
    headline max over the tail window) is re-certified with interval
    arithmetic.  Negating m leaves the distance unchanged, so only one
    half-space is visited.
    """
    if mode not in ("power", "subexponential"):
        raise ValueError("mode must be 'power' or 'subexponential'")
    s = len(thetas)
    if s not in (1, 2):
        raise ValueError("scans support 1 or 2 components")
    if s == 2 and q_max > 10**6:
        raise ValueError("two-dimensional boxes capped at q_max = 10^6")
    for t in thetas:
        if t.is_rational():
            raise ValidationError("type scans require irrational components")
    if window_min is None:
        window_min = max(2, q_max // 3)

    tf = [to_float(t) for t in thetas]

    def dist_of(v):
        f = np.mod(v, 1.0)
        return np.minimum(f, 1.0 - f)

    rows_m, rows_d = [], []
    if s == 1:
        q = np.arange(1, q_max + 1, dtype=np.int64)
        dist = dist_of(q.astype(np.float64) * tf[0])
        rows_m = [(int(v),) for v in q]
        order_norm = q
        rows_d = dist
        n_points = int(q_max)
    else:
        ms, ds, norms = [], [], []
        for q1 in range(0, q_max + 1):
            if q1 == 0:
                q2 = np.arange(1, q_max + 1, dtype=np.int64)
            else:
                q2 = np.arange(-q_max, q_max + 1, dtype=np.int64)
            v = q1 * tf[0] + q2.astype(np.float64) * tf[1]
            ms.extend((q1, int(b)) for b in q2)
            ds.append(dist_of(v))
            norms.append(np.maximum(abs(q1), np.abs(q2)))
        rows_m = ms
        rows_d = np.concatenate(ds)
        order_norm = np.concatenate(norms)
        n_points = len(rows_m)

    # sort by |m| so "running maximum" means what it says
    order = np.argsort(order_norm, kind="stable")
    report = TypeScanReport(list(thetas), q_max, mode, window_min, n_points=n_points)
    best = -math.inf
    best_window = -math.inf
    for idx in order:
        m_vec = rows_m[idx]
        norm = int(order_norm[idx])
        if norm < 2:
            continue
        expo = _exponent(float(rows_d[idx]), norm, mode)
        if math.isnan(expo):
            continue
        if expo > best:
            # candidate record: certify the distance before trusting it
            combo = linear_form(m_vec, thetas)
            if combo.is_rational():
                continue  # degenerate direction, not a Diophantine statement
            d_lo, d_hi = certified_distance_to_integers(combo)
            expo_hi = _exponent(d_lo, norm, mode) if d_lo > 0 else math.inf
            expo_lo = _exponent(d_hi, norm, mode)
            if expo_lo > best:
                best = expo_lo
                report.records.append(
                    {
                        "m": m_vec,
                        "distance": d_hi,
                        "distance_lo": d_lo,
                        "exponent": expo_lo,
                        "exponent_hi": expo_hi,
                        "norm": norm,
                    }
                )
            if norm >= window_min:
                best_window = max(best_window, expo_lo)
        elif norm >= window_min and expo > best_window:
            combo = linear_form(m_vec, thetas)
            if combo.is_rational():
                continue
            _, d_hi = certified_distance_to_integers(combo)
            best_window = max(best_window, _exponent(d_hi, norm, mode))
    report.max_exponent = best_window
    return report
