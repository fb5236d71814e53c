"""Exact symbolic reals with rigorous dyadic interval evaluation.

A value is one of three closed families:

  * rational          p/q, held as an exact ``Fraction``;
  * quadratic surd    (a + b*sqrt(d))/c with integer a, b, c and squarefree
                      d >= 2 (normalised so b != 0, c > 0, gcd(a,b,c) = 1);
  * Moebius image     (a*t + b)/(c*t + d) of a transcendental base constant
                      t in {pi, e}, with rational a..d and a*d - b*c != 0.

The golden ratio parses to the quadratic surd (1 + sqrt(5))/2.  The three
families are closed under negation, reciprocals and affine maps x -> p*x + q
with rational p, q, which is exactly the closure needed to derive gamma = 1/alpha
and delta = (1 - beta)/alpha from a Beatty pair, and to run the Gauss map of a
continued fraction without ever leaving exact arithmetic.

``eval`` returns a *correctly rounded* enclosure on the dyadic grid of the
requested precision: the two endpoints are the nearest grid neighbours of the
true value (a single point if the value itself is dyadic).  Correct rounding
costs a refinement loop but buys two properties the rest of the toolkit leans
on: enclosures at increasing precision are nested, and a floor/fractional-part
decision can never flip once made.  Irrational values never sit on a dyadic
grid point, so the refinement loop always terminates for them; rationals are
handled by exact arithmetic without any loop.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import gmpy2

from .errors import NotRepresentable, ParseError, PrecisionExhausted

__all__ = [
    "IntervalReal",
    "RealExpr",
    "RationalExpr",
    "QuadraticExpr",
    "MobiusExpr",
    "make_rational",
    "make_quadratic",
    "make_const",
    "make_sqrt",
    "parse_real",
    "floor_interval",
    "frac_interval",
    "decide_floor",
    "decide_frac",
    "decide_less_than",
    "refine_enclosure",
    "to_float",
    "mul_expr",
    "add_expr",
    "quadratic_floor_exact",
    "squarefree_decompose",
    "DEFAULT_BITS",
    "DEFAULT_BITS_CAP",
]

DEFAULT_BITS = 64
DEFAULT_BITS_CAP = 4096
# absolute ceiling on internal working precision; far beyond any sane use
_HARD_WORK_CAP = 1 << 22


class RationalFromDecimalWarning(UserWarning):
    """A decimal literal was interpreted as an exact rational.

    Irrationality cannot be inferred from finitely many digits, so operations
    that require an irrational value will refuse such an input.
    """


# ---------------------------------------------------------------------------
# dyadic intervals
# ---------------------------------------------------------------------------


def _is_dyadic(x: Fraction) -> bool:
    q = x.denominator
    return q & (q - 1) == 0


def _floor_log2(x: Fraction) -> int:
    """floor(log2(x)) for a positive Fraction, exactly."""
    e = x.numerator.bit_length() - x.denominator.bit_length()
    if Fraction(2) ** e > x:
        e -= 1
    elif Fraction(2) ** (e + 1) <= x:
        e += 1
    return e


@dataclass(frozen=True)
class IntervalReal:
    """A closed interval [lo, hi] with dyadic endpoints.

    ``bits`` records the precision level the interval was produced at; the
    relative-width contract  hi - lo <= 2^(1-bits) * max(1, |hi|)  holds for
    every instance.
    """

    lo: Fraction
    hi: Fraction
    bits: int

    def __post_init__(self):
        if not (_is_dyadic(self.lo) and _is_dyadic(self.hi)):
            raise ValueError("interval endpoints must be dyadic rationals")
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")
        if self.bits < 1:
            raise ValueError("bits must be positive")
        if self.hi - self.lo > Fraction(2) ** (1 - self.bits) * max(1, abs(self.hi)):
            raise ValueError("interval wider than its precision contract allows")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.midpoint())

    @staticmethod
    def from_endpoints(lo: Fraction, hi: Fraction) -> "IntervalReal":
        """Wrap endpoints, recording the largest precision the width supports."""
        width = hi - lo
        scale = max(1, abs(hi))
        if width == 0:
            bits = 10**6  # point interval: any precision claim is valid
        else:
            # largest b with width <= 2^(1-b) * scale
            bits = _floor_log2(Fraction(2 * scale, width))
            while Fraction(2) ** (1 - bits) * scale < width:
                bits -= 1
            bits = max(1, bits)
        return IntervalReal(lo, hi, bits)


def floor_interval(x: IntervalReal):
    """Common floor of both endpoints, or None when the interval straddles an integer."""
    flo = x.lo.__floor__()
    fhi = x.hi.__floor__()
    if flo == fhi:
        return flo
    # [k - eps, k] still has a decided floor when hi is exactly the integer k
    # only if lo == hi == k; otherwise the true value may lie on either side.
    return None


def frac_interval(x: IntervalReal):
    """Fractional part x - floor(x) as an interval in [0, 1), or None if undecided.

    The endpoints shift by an integer, so the width is unchanged; the declared
    precision is recomputed because the contract scales with the new |hi|.
    """
    f = floor_interval(x)
    if f is None:
        return None
    return IntervalReal.from_endpoints(x.lo - f, x.hi - f)


# ---------------------------------------------------------------------------
# base-constant enclosures
# ---------------------------------------------------------------------------

_CONST_CACHE: dict = {}


def _const_enclosure(name: str, work_bits: int) -> tuple[Fraction, Fraction]:
    """Rigorous [lo, hi] for a transcendental base constant at work_bits precision.

    MPFR guarantees correct rounding under a directed rounding mode, so the
    two one-sided evaluations bracket the true value; binary floats convert
    to Fractions exactly.
    """
    key = (name, work_bits)
    hit = _CONST_CACHE.get(key)
    if hit is not None:
        return hit
    ctx_args = {"precision": max(work_bits, 2)}
    with gmpy2.context(**ctx_args, round=gmpy2.RoundDown):
        lo_m = gmpy2.const_pi() if name == "pi" else gmpy2.exp(1)
    with gmpy2.context(**ctx_args, round=gmpy2.RoundUp):
        hi_m = gmpy2.const_pi() if name == "pi" else gmpy2.exp(1)

    def to_frac(v):
        num, den = v.as_integer_ratio()
        return Fraction(int(num), int(den))  # plain ints; mpz must not leak out

    enc = (to_frac(lo_m), to_frac(hi_m))
    _CONST_CACHE[key] = enc
    return enc


def squarefree_decompose(d: int) -> tuple[int, int]:
    """Write d = s^2 * d0 with d0 squarefree; returns (s, d0).

    Trial division; fine for the word-sized radicands this toolkit meets.
    """
    if d < 1:
        raise ValueError("radicand must be positive")
    s, d0 = 1, d
    f = 2
    while f * f <= d0:
        while d0 % (f * f) == 0:
            d0 //= f * f
            s *= f
        f += 1 if f == 2 else 2
    return s, d0


# ---------------------------------------------------------------------------
# expression classes
# ---------------------------------------------------------------------------


class RealExpr:
    """Base class; see the module docstring for the closed families."""

    # -- classification ----------------------------------------------------

    def is_rational(self) -> bool:
        raise NotImplementedError

    def as_fraction(self) -> Fraction:
        raise NotImplementedError("not a rational value")

    @property
    def kind(self) -> str:
        raise NotImplementedError

    # -- exact arithmetic ---------------------------------------------------

    def affine(self, scale, shift) -> "RealExpr":
        """Exact p*x + q with rational p, q."""
        raise NotImplementedError

    def reciprocal(self) -> "RealExpr":
        raise NotImplementedError

    def __neg__(self):
        return self.affine(-1, 0)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.affine(1, other)
        return add_expr(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.affine(1, -Fraction(other))
        return add_expr(self, -other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return RationalExpr(Fraction(0))
            return self.affine(other, 0)
        return mul_expr(self, other)

    __rmul__ = __mul__

    # -- interval evaluation -------------------------------------------------

    def _refine(self, work_bits: int):
        """Rigorous (lo, hi) Fraction enclosure, or None to request more bits."""
        raise NotImplementedError

    def eval(self, bits: int) -> IntervalReal:
        """Correctly rounded enclosure at the requested precision (bits >= 8)."""
        if bits < 8:
            raise ValueError("eval requires bits >= 8")
        if self.is_rational():
            return _interval_from_fraction(self.as_fraction(), bits)
        work = bits + 16
        while work <= _HARD_WORK_CAP:
            enc = self._refine(work)
            if enc is not None:
                snapped = _snap_to_grid(enc[0], enc[1], bits)
                if snapped is not None:
                    return snapped
            work *= 2
        raise PrecisionExhausted(f"could not decide grid cell of {self!r} at {bits} bits")

    def __float__(self) -> float:
        return to_float(self)


class RationalExpr(RealExpr):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = Fraction(value)

    def is_rational(self):
        return True

    def as_fraction(self):
        return self.value

    @property
    def kind(self):
        return "rational"

    def affine(self, scale, shift):
        return RationalExpr(Fraction(scale) * self.value + Fraction(shift))

    def reciprocal(self):
        if self.value == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return RationalExpr(1 / self.value)

    def _refine(self, work_bits):
        return (self.value, self.value)

    def __repr__(self):
        return f"rational:{self.value}"

    def __eq__(self, other):
        return isinstance(other, RationalExpr) and self.value == other.value

    def __hash__(self):
        return hash(("rational", self.value))


class QuadraticExpr(RealExpr):
    """(a + b*sqrt(d))/c, normalised: d squarefree >= 2, b != 0, c > 0, gcd(a,b,c)=1."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int, b: int, c: int, d: int):
        # invariants enforced by make_quadratic; the raw constructor trusts them
        self.a, self.b, self.c, self.d = a, b, c, d

    def is_rational(self):
        return False

    @property
    def kind(self):
        return "quadratic"

    def affine(self, scale, shift):
        p, q = Fraction(scale), Fraction(shift)
        if p == 0:
            return RationalExpr(q)
        # ((a + b sqrt d)/c)*p + q = (a p + q c + b p sqrt d)/c, cleared of denominators
        num_shift = self.a * p + q * self.c
        num_b = self.b * p
        den = Fraction(self.c)
        m = num_shift.denominator * num_b.denominator // gcd(
            num_shift.denominator, num_b.denominator
        )
        return make_quadratic(
            int(num_shift * m), int(num_b * m), int(den * m), self.d
        )

    def reciprocal(self):
        # c/(a + b sqrt d) = c(a - b sqrt d)/(a^2 - b^2 d)
        norm = self.a * self.a - self.b * self.b * self.d
        # norm == 0 would force sqrt(d) rational, impossible for squarefree d >= 2
        return make_quadratic(self.c * self.a, -self.c * self.b, norm, self.d)

    def _refine(self, work_bits):
        g = work_bits
        r = isqrt(self.d << (2 * g))
        s_lo = Fraction(r, 1 << g)
        s_hi = Fraction(r + 1, 1 << g)
        if self.b >= 0:
            lo = (self.a + self.b * s_lo) / self.c
            hi = (self.a + self.b * s_hi) / self.c
        else:
            lo = (self.a + self.b * s_hi) / self.c
            hi = (self.a + self.b * s_lo) / self.c
        return (lo, hi)

    def floor_exact(self) -> int:
        return quadratic_floor_exact(self.a, self.b, self.c, self.d)

    def __repr__(self):
        return f"quadratic:({self.a}+{self.b}*sqrt({self.d}))/{self.c}"

    def __eq__(self, other):
        return (
            isinstance(other, QuadraticExpr)
            and (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)
        )

    def __hash__(self):
        return hash(("quadratic", self.a, self.b, self.c, self.d))


class MobiusExpr(RealExpr):
    """(a*t + b)/(c*t + d) for a base constant t in {pi, e}; a*d - b*c != 0.

    Coefficients are held as integers with gcd 1 and a canonical sign.  The
    nonzero determinant makes the value transcendental, hence irrational.
    """

    __slots__ = ("base", "a", "b", "c", "d")

    def __init__(self, base: str, a: int, b: int, c: int, d: int):
        self.base, self.a, self.b, self.c, self.d = base, a, b, c, d

    def is_rational(self):
        return False

    @property
    def kind(self):
        return "transcendental"

    def affine(self, scale, shift):
        p, q = Fraction(scale), Fraction(shift)
        if p == 0:
            return RationalExpr(q)
        return _make_mobius(
            self.base,
            p * self.a + q * self.c,
            p * self.b + q * self.d,
            Fraction(self.c),
            Fraction(self.d),
        )

    def reciprocal(self):
        return _make_mobius(
            self.base, Fraction(self.c), Fraction(self.d), Fraction(self.a), Fraction(self.b)
        )

    def _refine(self, work_bits):
        t_lo, t_hi = _const_enclosure(self.base, work_bits)
        num = _affine_interval(t_lo, t_hi, self.a, self.b)
        den = _affine_interval(t_lo, t_hi, self.c, self.d)
        if den[0] <= 0 <= den[1]:
            return None  # denominator sign not yet resolved
        candidates = [
            num[0] / den[0],
            num[0] / den[1],
            num[1] / den[0],
            num[1] / den[1],
        ]
        return (min(candidates), max(candidates))

    def __repr__(self):
        return f"mobius[{self.base}]:({self.a}*t+{self.b})/({self.c}*t+{self.d})"

    def __eq__(self, other):
        return (
            isinstance(other, MobiusExpr)
            and (self.base, self.a, self.b, self.c, self.d)
            == (other.base, other.a, other.b, other.c, other.d)
        )

    def __hash__(self):
        return hash(("mobius", self.base, self.a, self.b, self.c, self.d))


def _affine_interval(lo: Fraction, hi: Fraction, p, q) -> tuple[Fraction, Fraction]:
    a = p * lo + q
    b = p * hi + q
    return (a, b) if a <= b else (b, a)


# ---------------------------------------------------------------------------
# constructors and normalisation
# ---------------------------------------------------------------------------


def make_rational(value) -> RationalExpr:
    return RationalExpr(Fraction(value))


def make_quadratic(a: int, b: int, c: int, d: int) -> RealExpr:
    """Normalised (a + b*sqrt(d))/c; collapses to a rational when b*sqrt(d) does."""
    if c == 0:
        raise ValueError("zero denominator")
    if d < 2:
        raise ValueError("radicand must be >= 2")
    s, d0 = squarefree_decompose(d)
    a, b, d = a, b * s, d0
    if d == 1 or b == 0:
        return RationalExpr(Fraction(a + b, c) if d == 1 else Fraction(a, c))
    if c < 0:
        a, b, c = -a, -b, -c
    g = gcd(gcd(abs(a), abs(b)), c)
    return QuadraticExpr(a // g, b // g, c // g, d)


def make_sqrt(d: int) -> RealExpr:
    return make_quadratic(0, 1, 1, d)


def make_const(name: str) -> RealExpr:
    if name == "phi":
        return make_quadratic(1, 1, 2, 5)
    if name in ("pi", "e"):
        return MobiusExpr(name, 1, 0, 0, 1)
    raise ValueError(f"unknown constant {name!r}")


def _make_mobius(base, a: Fraction, b: Fraction, c: Fraction, d: Fraction) -> RealExpr:
    det = a * d - b * c
    if det == 0:
        # degenerate map: constant value a/c (or b/d when c == 0)
        if c != 0:
            return RationalExpr(a / c)
        return RationalExpr(b / d)
    m = 1
    for f in (a, b, c, d):
        m = m * f.denominator // gcd(m, f.denominator)
    ai, bi, ci, di = (int(f * m) for f in (a, b, c, d))
    g = 0
    for v in (ai, bi, ci, di):
        g = gcd(g, abs(v))
    ai, bi, ci, di = ai // g, bi // g, ci // g, di // g
    if ci < 0 or (ci == 0 and di < 0):
        ai, bi, ci, di = -ai, -bi, -ci, -di
    return MobiusExpr(base, ai, bi, ci, di)


# ---------------------------------------------------------------------------
# partial exact addition / multiplication
# ---------------------------------------------------------------------------


def add_expr(x: RealExpr, y: RealExpr) -> RealExpr:
    """Exact x + y where the result stays inside the closed families."""
    if x.is_rational():
        return y.affine(1, x.as_fraction())
    if y.is_rational():
        return x.affine(1, y.as_fraction())
    if isinstance(x, QuadraticExpr) and isinstance(y, QuadraticExpr) and x.d == y.d:
        c = x.c * y.c
        a = x.a * y.c + y.a * x.c
        b = x.b * y.c + y.b * x.c
        return make_quadratic(a, b, c, x.d)
    if isinstance(x, MobiusExpr) and isinstance(y, MobiusExpr) and x.base == y.base:
        return _mobius_rational_op(x, y, op="add")
    raise NotRepresentable(f"cannot add {x!r} and {y!r} exactly")


def mul_expr(x: RealExpr, y: RealExpr) -> RealExpr:
    """Exact x * y where the result stays inside the closed families."""
    if x.is_rational():
        v = x.as_fraction()
        return RationalExpr(0) if v == 0 else y.affine(v, 0)
    if y.is_rational():
        v = y.as_fraction()
        return RationalExpr(0) if v == 0 else x.affine(v, 0)
    if isinstance(x, QuadraticExpr) and isinstance(y, QuadraticExpr) and x.d == y.d:
        a = x.a * y.a + x.b * y.b * x.d
        b = x.a * y.b + x.b * y.a
        return make_quadratic(a, b, x.c * y.c, x.d)
    if isinstance(x, MobiusExpr) and isinstance(y, MobiusExpr) and x.base == y.base:
        return _mobius_rational_op(x, y, op="mul")
    raise NotRepresentable(f"cannot multiply {x!r} and {y!r} exactly")


def _mobius_rational_op(x: MobiusExpr, y: MobiusExpr, op: str) -> RealExpr:
    """Combine two Moebius images of the same base as a rational function of t.

    The product/sum is a ratio of quadratics in t; it is representable exactly
    when the ratio reduces to degree <= 1 over degree <= 1 (or to a constant).
    """
    # polynomials as coefficient tuples (c0, c1, c2) for c0 + c1 t + c2 t^2
    def pmul(p, q):
        out = [Fraction(0)] * (len(p) + len(q) - 1)
        for i, pi in enumerate(p):
            for j, qj in enumerate(q):
                out[i + j] += pi * qj
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out

    def padd(p, q):
        n = max(len(p), len(q))
        out = [Fraction(0)] * n
        for i, v in enumerate(p):
            out[i] += v
        for i, v in enumerate(q):
            out[i] += v
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return out

    nx = [Fraction(x.b), Fraction(x.a)]
    dx = [Fraction(x.d), Fraction(x.c)]
    ny = [Fraction(y.b), Fraction(y.a)]
    dy = [Fraction(y.d), Fraction(y.c)]
    if op == "mul":
        num, den = pmul(nx, ny), pmul(dx, dy)
    else:
        num, den = padd(pmul(nx, dy), pmul(ny, dx)), pmul(dx, dy)
    num, den = _poly_reduce(num, den)
    if len(num) <= 2 and len(den) <= 2:
        a = num[1] if len(num) > 1 else Fraction(0)
        c = den[1] if len(den) > 1 else Fraction(0)
        return _make_mobius(x.base, a, num[0], c, den[0])
    raise NotRepresentable("product of Moebius values does not reduce to a Moebius value")


def _poly_trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(p, q):
    """Polynomial division over Fractions; coefficient lists low-to-high."""
    p = list(p)
    q = _poly_trim(q)
    out = [Fraction(0)] * max(len(p) - len(q) + 1, 1)
    while len(p) >= len(q):
        if p[-1] == 0:
            p.pop()
            if len(p) == 0:
                p = [Fraction(0)]
                break
            continue
        shift = len(p) - len(q)
        coef = p[-1] / q[-1]
        out[shift] = coef
        for i, qv in enumerate(q):
            p[i + shift] -= coef * qv
        p.pop()
        if not p:
            p = [Fraction(0)]
            break
    return _poly_trim(out), _poly_trim(p)


def _poly_reduce(num, den):
    """Divide out the monic polynomial gcd (tiny degrees, exact Fractions)."""
    a, b = _poly_trim(num), _poly_trim(den)
    while not (len(b) == 1 and b[0] == 0):
        _, r = _poly_divmod(a, b)
        a, b = b, r
    g = [c / a[-1] for c in a]
    if len(g) > 1:
        num, _ = _poly_divmod(num, g)
        den, _ = _poly_divmod(den, g)
    return _poly_trim(num), _poly_trim(den)


# ---------------------------------------------------------------------------
# grid snapping
# ---------------------------------------------------------------------------


def _interval_from_fraction(v: Fraction, bits: int) -> IntervalReal:
    if _is_dyadic(v):
        return IntervalReal(v, v, bits)
    snapped = _snap_to_grid(v, v, bits)
    assert snapped is not None  # a point always sits inside one grid cell
    return snapped


def _snap_to_grid(lo: Fraction, hi: Fraction, bits: int):
    """Round a rigorous enclosure outward onto the dyadic grid of `bits`.

    Returns None when the enclosure is still too wide to identify the grid
    cell of the true value (sign undecided, power-of-two scale undecided, or
    more than one candidate cell).
    """
    if lo <= 0 <= hi:
        if lo == hi == 0:
            return IntervalReal(Fraction(0), Fraction(0), bits)
        return None
    if lo > 0:
        tz, aw = lo, hi
    else:
        tz, aw = -hi, -lo
    e_tz = int(tz).bit_length()
    e_aw = int(aw).bit_length()
    if e_tz != e_aw:
        return None  # enclosure straddles a power of two; refine first
    h = Fraction(2) ** (e_tz - bits)
    c_lo = lo // h
    c_hi = hi // h
    if c_lo == c_hi:
        return IntervalReal(c_lo * h, (c_lo + 1) * h, bits)
    if c_hi == c_lo + 1 and hi == c_hi * h:
        if lo == hi:
            return IntervalReal(lo, hi, bits)
        return IntervalReal(c_lo * h, c_hi * h, bits)
    return None


# ---------------------------------------------------------------------------
# decision procedures with precision escalation
# ---------------------------------------------------------------------------


def refine_enclosure(expr, work_bits: int) -> tuple[Fraction, Fraction]:
    """Rigorous Fraction enclosure at (at least) the requested working precision."""
    w = max(work_bits, 8)
    while w <= _HARD_WORK_CAP:
        enc = expr._refine(w)
        if enc is not None:
            return enc
        w *= 2
    raise PrecisionExhausted(f"no usable enclosure for {expr!r}")


def decide_floor(expr, bits: int = DEFAULT_BITS, cap: int = DEFAULT_BITS_CAP) -> int:
    """Exact floor of an expression, escalating precision up to `cap` bits."""
    if expr.is_rational():
        return expr.as_fraction().__floor__()
    b = bits
    while True:
        f = floor_interval(expr.eval(b))
        if f is not None:
            return f
        if b >= cap:
            raise PrecisionExhausted(f"floor of {expr!r} undecided at {cap} bits")
        b = min(2 * b, cap)


def decide_frac(expr, bits: int = DEFAULT_BITS, cap: int = DEFAULT_BITS_CAP):
    """(floor, fractional-part interval) of an expression, with escalation."""
    if expr.is_rational():
        v = expr.as_fraction()
        f = v.__floor__()
        return f, _interval_from_fraction(v - f, max(bits, 8))
    b = bits
    while True:
        iv = expr.eval(b)
        fr = frac_interval(iv)
        if fr is not None:
            return floor_interval(iv), fr
        if b >= cap:
            raise PrecisionExhausted(f"fractional part of {expr!r} undecided at {cap} bits")
        b = min(2 * b, cap)


def decide_less_than(x, y, bits: int = DEFAULT_BITS, cap: int = DEFAULT_BITS_CAP) -> bool:
    """Exact strict comparison x < y of two expressions (must not be equal).

    Escalates precision until the enclosures separate; callers are responsible
    for not comparing two representations of the same real.
    """
    if x.is_rational() and y.is_rational():
        return x.as_fraction() < y.as_fraction()
    b = bits
    while True:
        ix = x.eval(b)
        iy = y.eval(b)
        if ix.hi < iy.lo:
            return True
        if iy.hi < ix.lo:
            return False
        if b >= cap:
            raise PrecisionExhausted("comparison undecided (equal values?)")
        b = min(2 * b, cap)


def to_float(expr) -> float:
    """Double-precision approximation (midpoint of a 56-bit enclosure)."""
    if expr.is_rational():
        return float(expr.as_fraction())
    return float(expr.eval(56).midpoint())


def float_down(x: Fraction) -> float:
    """Largest double <= x (float() rounds to nearest, which is not enough
    when the value feeds a certified lower bound)."""
    f = float(x)
    if Fraction(f) > x:
        f = math.nextafter(f, -math.inf)
    return f


def float_up(x: Fraction) -> float:
    """Smallest double >= x."""
    f = float(x)
    if Fraction(f) < x:
        f = math.nextafter(f, math.inf)
    return f


# ---------------------------------------------------------------------------
# exact floor of a quadratic surd via integer square-root comparisons
# ---------------------------------------------------------------------------


def _sign_a_plus_b_sqrt_d(a: int, b: int, d: int) -> int:
    """Exact sign of a + b*sqrt(d) using only integer arithmetic."""
    if b == 0:
        return (a > 0) - (a < 0)
    if b > 0 and a >= 0:
        return 1
    if b < 0 and a <= 0:
        return -1
    if b > 0:  # a < 0: compare b*sqrt(d) against |a|
        lhs, rhs = b * b * d, a * a
    else:  # a > 0, b < 0: compare a against |b|*sqrt(d)
        lhs, rhs = a * a, b * b * d
    return (lhs > rhs) - (lhs < rhs)


def quadratic_floor_exact(a: int, b: int, c: int, d: int) -> int:
    """floor((a + b*sqrt(d))/c), decided by integer square-root comparisons."""
    if c == 0:
        raise ZeroDivisionError
    if c < 0:
        a, b, c = -a, -b, -c
    f = math.floor((a + b * math.sqrt(d)) / c)
    # correct the float seed; |error| is tiny, so a short walk suffices
    while _sign_a_plus_b_sqrt_d(a - f * c, b, d) < 0:
        f -= 1
    while _sign_a_plus_b_sqrt_d(a - (f + 1) * c, b, d) >= 0:
        f += 1
    return f


# ---------------------------------------------------------------------------
# text grammar
# ---------------------------------------------------------------------------

_RATIONAL_RE = re.compile(r"^rational:(-?\d+)(?:/(-?\d+))?$")
_QUADRATIC_RE = re.compile(
    r"^quadratic:\(\s*(-?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\)\s*/\s*(-?\d+)$"
)
_CONST_RE = re.compile(r"^const:(e|pi|phi)$")
_SQRT_RE = re.compile(r"^sqrt\(\s*(\d+)\s*\)$")
_INT_RE = re.compile(r"^-?\d+$")
_FRACTION_RE = re.compile(r"^(-?\d+)/(-?\d+)$")
_DECIMAL_RE = re.compile(r"^-?\d+\.\d+$")


def parse_real(text: str) -> RealExpr:
    """Parse the config grammar for exact reals.

    Forms: ``rational:p/q``, ``quadratic:(a+b*sqrt(d))/c``, ``const:e|pi|phi``,
    plus sugar ``sqrt(d)``, bare integers, bare fractions ``p/q`` and decimal
    literals.  A decimal literal is read as the exact rational it denotes and
    a warning is issued, since irrationality cannot be inferred from digits.
    """
    s = text.strip()
    m = _RATIONAL_RE.match(s)
    if m:
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return make_rational(Fraction(num, den))
    m = _QUADRATIC_RE.match(s)
    if m:
        a = int(m.group(1))
        b = int(m.group(3)) * (1 if m.group(2) == "+" else -1)
        d = int(m.group(4))
        c = int(m.group(5))
        if c == 0:
            raise ParseError(f"zero denominator in {text!r}")
        if d < 2 or isqrt(d) ** 2 == d:
            raise ParseError(f"radicand must be a nonsquare >= 2 in {text!r}")
        return make_quadratic(a, b, c, d)
    m = _CONST_RE.match(s)
    if m:
        return make_const(m.group(1))
    m = _SQRT_RE.match(s)
    if m:
        d = int(m.group(1))
        if d < 2 or isqrt(d) ** 2 == d:
            raise ParseError(f"radicand must be a nonsquare >= 2 in {text!r}")
        return make_sqrt(d)
    if _INT_RE.match(s):
        return make_rational(int(s))
    m = _FRACTION_RE.match(s)
    if m:
        if int(m.group(2)) == 0:
            raise ParseError(f"zero denominator in {text!r}")
        return make_rational(Fraction(int(m.group(1)), int(m.group(2))))
    if _DECIMAL_RE.match(s):
        warnings.warn(
            f"decimal literal {s!r} treated as an exact rational; "
            "irrationality-dependent operations will refuse it",
            RationalFromDecimalWarning,
            stacklevel=2,
        )
        return make_rational(Fraction(s))
    raise ParseError(f"unrecognised real literal {text!r}")


def render_real(expr: RealExpr) -> str:
    """Inverse of parse_real for the three canonical families."""
    if isinstance(expr, RationalExpr):
        return f"rational:{expr.value.numerator}/{expr.value.denominator}"
    if isinstance(expr, QuadraticExpr):
        sign = "+" if expr.b >= 0 else "-"
        return f"quadratic:({expr.a}{sign}{abs(expr.b)}*sqrt({expr.d}))/{expr.c}"
    if isinstance(expr, MobiusExpr):
        if (expr.a, expr.b, expr.c, expr.d) == (1, 0, 0, 1):
            return f"const:{expr.base}"
        return repr(expr)
    raise TypeError(f"not a canonical RealExpr: {expr!r}")
