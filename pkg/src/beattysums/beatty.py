"""Beatty sequences: construction, exact membership, enumeration.

For alpha > 1 irrational and any real beta, the sequence consists of the
integers floor(alpha*m + beta).  With gamma = 1/alpha and
delta = (1 - beta)/alpha, an integer n belongs to the sequence exactly when

    0 < {gamma*n + delta} < gamma        (strict on both sides),

and for irrational alpha neither boundary case can occur for supported
(alpha, beta) pairs, so interval arithmetic with precision escalation always
reaches a decision.  Both characterisations are implemented -- enumeration
iterates m and emits floors, membership tests the fractional-part window --
so each one can be checked against the other.

Bulk operations run a float64 fast path with a certified safety margin and
fall back to exact interval arithmetic only for the (rare) near-boundary
points, which keeps million-element scans cheap without ever trusting an
uncertified decision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotRepresentable, ValidationError
from .primes import PrimeTable
from .reals import (
    DEFAULT_BITS_CAP,
    RationalExpr,
    RealExpr,
    add_expr,
    decide_floor,
    decide_frac,
    decide_less_than,
    frac_interval,
    mul_expr,
    refine_enclosure,
)

_ENCLOSURE_BITS = 160
_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class _FloatMirror:
    """Float image of an exact value together with a rigorous error bound."""

    mid: float
    err: float


def _mirror(expr: RealExpr, bits: int = _ENCLOSURE_BITS) -> _FloatMirror:
    lo, hi = refine_enclosure(expr, bits)
    mid = float((lo + hi) / 2)
    # |mid - true| <= half-width + conversion rounding
    err = float(hi - lo) / 2 + abs(mid) * 4 * _EPS + 1e-300
    return _FloatMirror(mid, err)


class BeattySequence:
    """floor(alpha*m + beta) for irrational alpha > 1."""

    def __init__(self, alpha: RealExpr, beta: RealExpr, bits_cap: int = DEFAULT_BITS_CAP):
        if alpha.is_rational():
            raise ValidationError(
                "alpha is rational; Beatty counting here requires irrational alpha "
                "(a decimal literal denotes a rational and is refused)"
            )
        if not decide_less_than(RationalExpr(1), alpha):
            raise ValidationError("alpha must exceed 1")
        self.alpha = alpha
        self.beta = beta
        self.bits_cap = bits_cap
        self.gamma = alpha.reciprocal()
        try:
            self.delta = mul_expr(beta.affine(-1, 1), self.gamma)
        except NotRepresentable as exc:
            raise NotRepresentable(
                "delta = (1 - beta)/alpha is not exactly representable for this "
                "(alpha, beta) pair; use a rational beta or a beta in the same "
                "quadratic field as alpha"
            ) from exc
        self._g = _mirror(self.gamma)
        self._d = _mirror(self.delta)
        self._a = _mirror(self.alpha)
        self._b = _mirror(self.beta)

    # -- exact scalar operations --------------------------------------------

    def member_via_floor(self, m: int) -> int:
        """floor(alpha*m + beta), exactly."""
        expr = add_expr(self.alpha.affine(m, 0), self.beta) if m != 0 else self.beta
        return decide_floor(expr, cap=self.bits_cap)

    def contains(self, n: int) -> bool:
        """Exact membership test via the fractional-part window."""
        if n < 1:
            raise ValueError("membership is defined for n >= 1")
        return self._contains_exact(n)

    def _shifted(self, n: int) -> RealExpr:
        # gamma*n + delta == gamma*(n + 1 - beta); the additive form stays in
        # the closed expression families for every supported (alpha, beta)
        return add_expr(self.gamma.affine(n, 0), self.delta)

    def _contains_exact(self, n: int) -> bool:
        t = self._shifted(n)
        if t.is_rational():
            # degenerate beta can land gamma*n + delta on a rational; the
            # window test reduces to exact comparisons
            fr = t.as_fraction()
            fr = fr - fr.__floor__()
            if fr == 0:
                return False
            return decide_less_than(RationalExpr(fr), self.gamma, cap=self.bits_cap)
        bits = 64
        while True:
            iv = t.eval(bits)
            fr = frac_interval(iv)
            giv = self.gamma.eval(bits)
            if fr is not None:
                if fr.lo > 0 and fr.hi < giv.lo:
                    return True
                if fr.lo > giv.hi:
                    return False
            if bits >= self.bits_cap:
                from .errors import PrecisionExhausted

                raise PrecisionExhausted(
                    f"membership of {n} undecided at {self.bits_cap} bits"
                )
            bits = min(2 * bits, self.bits_cap)

    def frac_point(self, n: int) -> float:
        """Certified float of {gamma*n + delta}, consistent with contains(n).

        The returned double lies inside (0, gamma) exactly when n is a member.
        """
        _, fr = decide_frac(self._shifted(n), cap=self.bits_cap)
        return float(fr.midpoint())

    # -- bulk operations -----------------------------------------------------

    def _frac_margin(self, nmax: int) -> float:
        # symbolic error + float evaluation slack for gamma*n + delta, n <= nmax
        sym = nmax * self._g.err + self._d.err
        rounding = (abs(self._g.mid) * nmax + abs(self._d.mid) + 1.0) * 8 * _EPS
        return max(8 * (sym + rounding), 1e-12)

    def membership_table(self, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(member bools, fractional parts) for an integer array, certified.

        Fast float64 window test with a safety margin; entries whose
        fractional part falls within the margin of a window edge are re-decided
        by exact interval arithmetic.  For every member the returned
        fractional part lies strictly inside (0, gamma); for every non-member
        strictly outside.
        """
        values = np.asarray(values, dtype=np.int64)
        if values.size and int(values.max()) * abs(self._g.mid) > 2**52:
            raise ValidationError("values too large for the float64 fast path")
        x = self._g.mid * values.astype(np.float64) + self._d.mid
        f = np.mod(x, 1.0)
        u = self._frac_margin(int(values.max()) if values.size else 1)
        g = self._g.mid
        sure_in = (f > u) & (f < g - u)
        sure_out = (f > g + u) & (f < 1.0 - u)
        member = sure_in.copy()
        fracs = f.copy()
        unsure = ~(sure_in | sure_out)
        for idx in np.flatnonzero(unsure):
            n = int(values[idx])
            member[idx] = self._contains_exact(n)
            fracs[idx] = self.frac_point(n)
        return member, fracs

    def enumerate_members(self, limit: int) -> np.ndarray:
        """All members in [1, limit], ascending (iterates m, emits floors)."""
        if limit < 1:
            raise ValueError("limit must be >= 1")
        a, b = self._a.mid, self._b.mid
        m_lo = int(np.floor((1 - b) / a)) - 3
        m_hi = int(np.ceil((limit + 1 - b) / a)) + 3
        m = np.arange(m_lo, m_hi + 1, dtype=np.int64)
        v = a * m.astype(np.float64) + b
        n_hat = np.floor(v)
        # distance from the nearest integer below/above decides trustworthiness
        dist = np.minimum(v - n_hat, 1.0 + n_hat - v)
        u = max(
            8 * (abs(m_hi) * self._a.err + self._b.err),
            8 * (abs(a) * abs(m_hi) + abs(b) + 1.0) * 8 * _EPS,
            1e-12,
        )
        n = n_hat.astype(np.int64)
        for idx in np.flatnonzero(dist <= u):
            n[idx] = self.member_via_floor(int(m[idx]))
        keep = (n >= 1) & (n <= limit)
        out = n[keep]
        assert np.all(np.diff(out) >= 1)  # alpha > 1 forces strictly increasing floors
        return out

    def prime_mask(self, limit: int, table: PrimeTable) -> np.ndarray:
        """mask[n] = True iff n <= limit is prime and belongs to the sequence."""
        if table.limit < limit:
            raise ValueError("prime table does not cover the requested limit")
        mask = np.zeros(limit + 1, dtype=bool)
        p = table.primes[table.primes <= limit]
        member, _ = self.membership_table(p)
        mask[p[member]] = True
        return mask

    def density(self) -> float:
        """Asymptotic density 1/alpha of the sequence."""
        return self._g.mid

    def __repr__(self):
        return f"BeattySequence(alpha={self.alpha!r}, beta={self.beta!r})"
