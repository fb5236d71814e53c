"""Smooth 1-periodic majorants/minorants of an interval indicator.

For a density gamma in (0,1) and an admissible width 0 < D < min(gamma,
1-gamma)/4, the majorant g+ and minorant g- of the indicator of (0, gamma)
are built by circular convolution with a C-infinity bump kernel:

    g+ = indicator(-D/2, gamma + D/2) * K,
    g- = indicator( D/2, gamma - D/2) * K,
    K(t) proportional to exp(-1/(1 - (2t/D)^2)),  supported on [-D/2, D/2],
    unit mass.

Consequences used everywhere downstream:

  * 0 <= g-(x) <= indicator(x) <= g+(x) <= 1 pointwise;
  * g+ is exactly 1 on [0, gamma] and exactly 0 outside (-D, gamma + D);
    g- is exactly 1 on [D, gamma - D] and exactly 0 outside (0, gamma);
  * the Fourier coefficients factor as g_hat(m) = chi_hat(m) * K_hat(m),
    so g_hat(0) = gamma +- D exactly and |g_hat(m)| inherits the kernel's
    superpolynomial decay: |g_hat(m)| <= C_r * D^(1-r) / (1+|m|)^r for every
    r >= 1, with constants this module measures rather than asserts.

Evaluation off the two transition zones costs nothing (the clamped kernel
CDF short-circuits to 0 or 1); inside a transition zone a Gauss-Kronrod
quadrature on the compact bump support delivers absolute accuracy ~1e-13.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import InvalidWidth

__all__ = ["SmoothedIndicator", "build", "kernel_mass"]

_QUAD_KW = dict(epsabs=1e-14, epsrel=1e-12, limit=500)


def _bump(u: float) -> float:
    if abs(u) >= 1.0:
        return 0.0
    return math.exp(-1.0 / (1.0 - u * u))


_KERNEL_MASS = None


def kernel_mass() -> float:
    """integral of exp(-1/(1-u^2)) over (-1, 1); computed once."""
    global _KERNEL_MASS
    if _KERNEL_MASS is None:
        val, err = quad(_bump, -1.0, 1.0, **_QUAD_KW)
        if err > 1e-12:
            raise RuntimeError("kernel mass quadrature failed to converge")
        _KERNEL_MASS = val
    return _KERNEL_MASS


@dataclass
class SmoothedIndicator:
    """One of the two smooth companions of the indicator of (0, gamma).

    The default width precondition is the conservative 0 < D < min(gamma,
    1-gamma)/4 used throughout the counting estimates.  ``strict=False``
    relaxes it to the constructive requirement D < min(gamma, 1-gamma)/2
    (transition zones must not collide or wrap), which some coefficient
    measurements need; nothing about the pointwise or Fourier properties
    changes in the relaxed regime.
    """

    gamma: float
    delta: float
    sign: int  # +1 majorant, -1 minorant
    strict: bool = True
    _cdf_cache: dict = field(default_factory=dict, repr=False)
    _khat_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not (0.0 < self.gamma < 1.0):
            raise InvalidWidth("gamma must lie in (0, 1)")
        factor = 0.25 if self.strict else 0.5
        if not (0.0 < self.delta < factor * min(self.gamma, 1.0 - self.gamma)):
            raise InvalidWidth(
                f"smoothing width {self.delta} outside (0, {factor*min(self.gamma,1-self.gamma)})"
            )
        if self.sign not in (+1, -1):
            raise InvalidWidth("sign must be +1 or -1")

    # underlying sharp interval (before convolution): (A, B)
    @property
    def _edges(self) -> tuple[float, float]:
        half = 0.5 * self.delta * self.sign
        return (-half, self.gamma + half)

    @property
    def length(self) -> float:
        """Length of the pre-convolution interval; equals the mean of g."""
        return self.gamma + self.sign * self.delta

    # -- kernel CDF -----------------------------------------------------------

    def _cdf(self, s: float) -> float:
        """integral of the unit bump from -1 to s, normalised to total mass 1."""
        if s <= -1.0:
            return 0.0
        if s >= 1.0:
            return 1.0
        key = round(s, 15)
        hit = self._cdf_cache.get(key)
        if hit is None:
            val, _ = quad(_bump, -1.0, s, **_QUAD_KW)
            hit = val / kernel_mass()
            self._cdf_cache[key] = hit
        return hit

    def eval_point(self, x: float) -> float:
        """g(x); exact 0/1 off the transition zones, quadrature inside them.

        The result is clamped into [0, 1]: quadrature noise of a couple of
        ulps must not leak past the range the sandwich inequalities rely on.
        """
        x = x % 1.0
        if x >= 1.0 - self.delta:
            x -= 1.0  # single-period window [-D, 1-D): both edges are interior
        a, b = self._edges
        fa = self._cdf(2.0 * (x - a) / self.delta)
        fb = self._cdf(2.0 * (x - b) / self.delta)
        return min(1.0, max(0.0, fa - fb))

    def eval_array(self, xs: np.ndarray) -> np.ndarray:
        return np.array([self.eval_point(float(v)) for v in np.asarray(xs, dtype=float)])

    # -- Fourier side -----------------------------------------------------------

    def kernel_coeff(self, m: int) -> float:
        """K_hat(m) = integral K(t) e(-mt) dt; real and even in m."""
        m = abs(int(m))
        if m == 0:
            return 1.0
        hit = self._khat_cache.get(m)
        if hit is None:
            # substitute t = (D/2) u: K_hat(m) = int bump(u) cos(pi m D u) du / mass
            val, _ = quad(_bump, -1.0, 1.0, weight="cos", wvar=math.pi * m * self.delta, **_QUAD_KW)
            hit = val / kernel_mass()
            self._khat_cache[m] = hit
        return hit

    def fourier_coeff(self, m: int) -> complex:
        """g_hat(m) = chi_hat(m) * K_hat(m) with the e(theta)=exp(2 pi i theta) convention."""
        if m == 0:
            return complex(self.length)
        a, b = self._edges
        center = 0.5 * (a + b)
        length = self.length
        chi = (
            np.exp(-2j * math.pi * m * center)
            * math.sin(math.pi * m * length)
            / (math.pi * m)
        )
        return complex(chi * self.kernel_coeff(m))

    def coeff_array(self, m_max: int) -> np.ndarray:
        """g_hat(m) for m = -m_max..m_max as a complex array (index m + m_max)."""
        out = np.empty(2 * m_max + 1, dtype=complex)
        for m in range(0, m_max + 1):
            c = self.fourier_coeff(m)
            out[m_max + m] = c
            out[m_max - m] = np.conj(c)
        return out

    def decay_constants(self, r_max: int, m_max: int) -> list[float]:
        """Measured C_r = max |g_hat(m)| (1+|m|)^r D^(r-1) over 0 < |m| <= m_max.

        The maximising |m| sits near r/D; callers should pass m_max comfortably
        beyond 1/D so the reported constant is the true supremum, not a range
        artefact.  Returns [C_1, ..., C_r_max].
        """
        if r_max > 6:
            raise ValueError("decay constants supported for r <= 6")
        if m_max < 1.0 / self.delta:
            raise ValueError("m_max must be at least 1/delta")
        mags = np.array([abs(self.fourier_coeff(m)) for m in range(1, m_max + 1)])
        ms = np.arange(1, m_max + 1, dtype=float)
        out = []
        for r in range(1, r_max + 1):
            out.append(float(np.max(mags * (1.0 + ms) ** r) * self.delta ** (r - 1)))
        return out

    def coeff_abs_sum(self, m_max: int) -> float:
        """Sum of |g_hat(m)| over |m| <= m_max."""
        mags = [abs(self.fourier_coeff(m)) for m in range(1, m_max + 1)]
        return self.length + 2.0 * float(np.sum(mags))

    def coeff_tail_bound(self, m_from: int, r_values=(2, 3, 4), m_measure: int | None = None) -> float:
        """Upper bound for the coefficient tail sum over |m| > m_from.

        Uses the measured decay constants: sum_{m > M} (1+m)^{-r} is at most
        (1+M)^{1-r}/(r-1), so the tail is at most
        2 * C_r * D^{1-r} * (1+M)^{1-r} / (r-1); the best r wins.
        """
        if m_measure is None:
            m_measure = max(m_from, int(8 * max(r_values) / self.delta) + 1)
        cs = self.decay_constants(max(r_values), m_measure)
        best = math.inf
        for r in r_values:
            c_r = cs[r - 1]
            bound = 2.0 * c_r * self.delta ** (1 - r) * (1.0 + m_from) ** (1 - r) / (r - 1)
            best = min(best, bound)
        return best


def build(gamma: float, delta: float, sign, strict: bool = True) -> SmoothedIndicator:
    """Construct the majorant (sign=+1/'plus') or minorant (sign=-1/'minus')."""
    if isinstance(sign, str):
        sign = {"plus": +1, "minus": -1}[sign]
    return SmoothedIndicator(gamma=float(gamma), delta=float(delta), sign=int(sign), strict=strict)
