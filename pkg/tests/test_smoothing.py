import math

import numpy as np
import pytest
from scipy.integrate import quad

from beattysums.errors import InvalidWidth
from beattysums.smoothing import build, kernel_mass

CASES = [(1 / math.sqrt(2), 0.05), (1 / math.sqrt(3), 0.02), (0.3, 0.01)]


def test_kernel_mass_value():
    # integral of exp(-1/(1-u^2)) over (-1,1)
    assert abs(kernel_mass() - 0.4439938161680786) < 1e-12


@pytest.mark.parametrize("gamma,delta", CASES)
def test_sandwich_and_range_on_grid(gamma, delta):
    gp = build(gamma, delta, "plus")
    gm = build(gamma, delta, "minus")
    xs = np.linspace(0.0, 1.0, 10_001)
    vp = gp.eval_array(xs)
    vm = gm.eval_array(xs)
    ind = ((xs % 1.0) > 0) & ((xs % 1.0) < gamma)
    assert np.all(vm <= ind)
    assert np.all(ind <= vp)
    assert np.all((0.0 <= vm) & (vm <= 1.0))
    assert np.all((0.0 <= vp) & (vp <= 1.0))


@pytest.mark.parametrize("gamma,delta", CASES)
def test_equals_indicator_off_transitions(gamma, delta):
    gp = build(gamma, delta, "plus")
    gm = build(gamma, delta, "minus")
    for x in np.linspace(delta, gamma - delta, 57):
        assert gp.eval_point(x) == 1.0
        assert gm.eval_point(x) == 1.0
    for x in np.linspace(gamma + delta, 1.0 - delta, 57):
        assert gp.eval_point(x) == 0.0
        assert gm.eval_point(x) == 0.0


def test_plateau_and_support_edges():
    g = 1 / math.sqrt(2)
    D = 0.05
    gp = build(g, D, "plus")
    gm = build(g, D, "minus")
    assert gp.eval_point(g / 2) == 1.0
    assert gm.eval_point(g + D) == 0.0
    assert gm.eval_point(0.0) == 0.0
    assert gp.eval_point(D) == 1.0 and gp.eval_point(g - D) == 1.0


def test_periodicity():
    gp = build(0.3, 0.01, "plus")
    for x in (0.125, 0.5, -0.25):  # dyadic x: x + 1 is the same double shifted
        assert gp.eval_point(x) == gp.eval_point(x + 1.0)
    for x in (0.13, 0.299, 0.995, -0.3):  # x + 1 rounds, so compare with slack
        assert abs(gp.eval_point(x) - gp.eval_point(x + 1.0)) < 1e-12


def test_monotone_transition():
    gp = build(0.3, 0.01, "plus")
    xs = np.linspace(-0.0099, -0.0001, 50)
    vals = gp.eval_array(xs)
    assert np.all(np.diff(vals) >= 0)


@pytest.mark.parametrize("gamma,delta", CASES)
def test_mean_values(gamma, delta):
    for sign, expect in ((+1, gamma + delta), (-1, gamma - delta)):
        g = build(gamma, delta, sign)
        mean, _ = quad(g.eval_point, 0.0, 1.0, limit=1000, epsabs=1e-12, epsrel=1e-12)
        assert abs(mean - expect) < 1e-10
        assert g.fourier_coeff(0) == complex(expect)


def test_conjugate_symmetry():
    g = build(0.3, 0.01, "plus")
    for m in (1, 5, 40):
        assert abs(np.conj(g.fourier_coeff(m)) - g.fourier_coeff(-m)) < 1e-16


def test_partial_sum_reconstruction():
    g = build(1 / math.sqrt(2), 0.05, "plus")
    M = 1000
    coeffs = g.coeff_array(M)
    ms = np.arange(-M, M + 1)
    gamma = g.gamma
    for x in (0.2, gamma / 2, 0.9, gamma + 2 * 0.05, 0.35):
        rec = float(np.real(np.sum(coeffs * np.exp(2j * math.pi * ms * x))))
        assert abs(rec - g.eval_point(x)) < 1e-6


@pytest.mark.parametrize("gamma,delta", CASES)
def test_decay_constants_finite_both_signs(gamma, delta):
    m_max = int(4 / delta) + 1
    for sign in ("plus", "minus"):
        cs = build(gamma, delta, sign).decay_constants(4, m_max)
        assert len(cs) == 4
        assert all(math.isfinite(c) and c > 0 for c in cs)
        # interval coefficient bound |chi_hat| <= 1/(pi m) forces C_1 <= 1
        assert cs[0] <= 1.0


def test_decay_constant_scaling_within_factor_10():
    for gamma in (1 / math.sqrt(2), 1 / math.sqrt(3)):
        per_delta = {}
        for delta in (0.1, 0.01):
            g = build(gamma, delta, "plus", strict=False)
            per_delta[delta] = g.decay_constants(4, int(32 / delta) + 1)
        for r in range(4):
            ratio = per_delta[0.1][r] / per_delta[0.01][r]
            assert 0.1 <= ratio <= 10.0


def test_invalid_width_rejected():
    with pytest.raises(InvalidWidth):
        build(0.5, 0.2, "plus")
    with pytest.raises(InvalidWidth):
        build(1 / math.sqrt(2), 0.1, "plus")  # strict quarter-minimum bound
    build(1 / math.sqrt(2), 0.1, "plus", strict=False)  # constructive bound allows it
    with pytest.raises(InvalidWidth):
        build(1 / math.sqrt(2), 0.2, "plus", strict=False)
    with pytest.raises(InvalidWidth):
        build(0.3, -0.01, "plus")


def test_decay_constants_domain():
    g = build(0.3, 0.01, "plus")
    with pytest.raises(ValueError):
        g.decay_constants(7, 200)
    with pytest.raises(ValueError):
        g.decay_constants(4, 50)  # m_max below 1/delta
