import math
from fractions import Fraction

import pytest

from beattysums.diophantine import (
    RadicalSum,
    certified_distance_to_integers,
    continued_fraction,
    convergent_approx,
    linear_form,
    quadratic_cf_period,
    type_scan,
)
from beattysums.errors import NotRepresentable, ValidationError, ZeroVector
from beattysums.reals import make_const, make_rational, make_sqrt, to_float


def test_radical_sum_arithmetic():
    s2 = RadicalSum.from_expr(make_sqrt(2))
    s3 = RadicalSum.from_expr(make_sqrt(3))
    assert (s2 * s3).terms == {6: Fraction(1)}
    assert (s2 * s2).is_rational() and (s2 * s2).as_fraction() == 2
    combo = s2.affine(Fraction(1, 2), 0) - s3.affine(Fraction(1, 3), 0)
    assert abs(to_float(combo) - (1 / math.sqrt(2) - 1 / math.sqrt(3))) < 1e-13


def test_radical_sum_reciprocal():
    # classic: 1/(sqrt(2)+sqrt(3)) = sqrt(3)-sqrt(2)
    x = RadicalSum(0, {2: 1, 3: 1})
    inv = x.reciprocal()
    assert inv == RadicalSum(0, {2: -1, 3: 1})
    # a denser element of Q(sqrt2, sqrt3)
    y = RadicalSum(Fraction(1, 2), {2: Fraction(-1, 3), 3: Fraction(2, 7), 6: Fraction(1, 5)})
    assert (y * y.reciprocal()).as_fraction() == 1


def test_linear_form_examples():
    lf = linear_form([1], [make_sqrt(2)])
    assert abs(to_float(lf) - math.sqrt(2)) < 1e-13
    z = linear_form([1, -1], [make_sqrt(2), make_sqrt(2)])
    assert z.is_rational() and z.as_fraction() == 0
    lf2 = linear_form([2, 3], [make_sqrt(2).reciprocal(), make_sqrt(3).reciprocal()])
    assert abs(to_float(lf2) - (math.sqrt(2) + math.sqrt(3))) < 1e-12
    with pytest.raises(ZeroVector):
        linear_form([0, 0], [make_sqrt(2), make_sqrt(3)])


def test_linear_form_transcendental():
    lf = linear_form([3], [make_const("pi")])
    assert abs(to_float(lf) - 3 * math.pi) < 1e-12
    lf2 = linear_form([1, 2], [make_const("e"), make_rational(Fraction(1, 2))])
    assert abs(to_float(lf2) - (math.e + 1.0)) < 1e-12
    with pytest.raises(NotRepresentable):
        linear_form([1, 1], [make_const("e"), make_sqrt(2)])
    with pytest.raises(NotRepresentable):
        linear_form([1, 1], [make_const("e"), make_const("pi")])


def test_cf_sqrt2():
    cf = continued_fraction(make_sqrt(2), 200)
    assert cf.partial_quotients[0] == 1
    assert all(a == 2 for a in cf.partial_quotients[1:])
    assert cf.convergents[:7] == [(1, 1), (3, 2), (7, 5), (17, 12), (41, 29), (99, 70), (239, 169)]


def test_cf_phi_fibonacci():
    cf = continued_fraction(make_const("phi"), 100)
    assert all(a == 1 for a in cf.partial_quotients)
    qs = [q for _, q in cf.convergents]
    assert qs[:9] == [1, 1, 2, 3, 5, 8, 13, 21, 34]


def test_cf_e_known_expansion():
    cf = continued_fraction(make_const("e"), 50_000)
    assert cf.partial_quotients[:13] == [2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8, 1]


def test_cf_determinant_identity():
    cf = continued_fraction(make_sqrt(7), 10_000)
    for (p1, q1), (p2, q2) in zip(cf.convergents, cf.convergents[1:]):
        assert p2 * q1 - p1 * q2 in (1, -1)


def test_cf_denominators_increase():
    cf = continued_fraction(make_sqrt(13), 10_000)
    qs = [q for _, q in cf.convergents]
    assert all(b > a for a, b in zip(qs[1:], qs[2:]))


def test_cf_residual_bound_invariant():
    theta = make_sqrt(2)
    cf = continued_fraction(theta, 1000)
    t = to_float(theta)
    for (p1, q1), (_, q2) in zip(cf.convergents, cf.convergents[1:]):
        assert abs(q1 * t - p1) < 1.0 / q2 + 1e-12


def test_cf_rejects_rational():
    with pytest.raises(ValidationError):
        continued_fraction(make_rational(Fraction(22, 7)), 100)


def test_periods():
    assert quadratic_cf_period(make_sqrt(2))[1] == [2]
    assert quadratic_cf_period(make_sqrt(3))[1] == [1, 2]
    assert quadratic_cf_period(make_sqrt(7))[1] == [1, 1, 1, 4]
    pre, per = quadratic_cf_period(make_const("phi"))
    assert per == [1]


def test_convergent_approx_sqrt2():
    r = convergent_approx(make_sqrt(2), 100, 0.25)
    assert (r.a, r.q) == (99, 70)
    assert r.residual_bound <= 1 / 100
    assert abs(70 * math.sqrt(2) - 99) <= r.residual_bound + 1e-15
    r150 = convergent_approx(make_sqrt(2), 150, 0.25)
    assert (r150.a, r150.q) == (99, 70) and r150.residual_bound <= 1 / 150


def test_convergent_approx_phi_fibonacci():
    r = convergent_approx(make_const("phi"), 1000, 0.25)
    assert r.q == 987 and math.gcd(abs(r.a), r.q) == 1


def test_approximation_certificates_across_scales():
    combo = linear_form([1, -1], [make_sqrt(2).reciprocal(), make_sqrt(3).reciprocal()])
    for theta in (make_sqrt(2), make_const("phi"), combo):
        for Q in (10**3, 10**6, 10**9):
            r = convergent_approx(theta, Q, 0.1)
            assert r.q <= Q
            assert math.gcd(abs(r.a), r.q) == 1
            assert r.residual_bound <= 1.0 / Q


def test_approximation_flags_small_denominator():
    # epsilon close to 1/2 makes Q^epsilon large enough to trip the flag
    r = convergent_approx(make_sqrt(2), 10**6, 0.49)
    assert isinstance(r.meets_lower_bound, bool)
    r2 = convergent_approx(make_sqrt(2), 1000, 0.05)
    assert r2.meets_lower_bound  # q = 985? no: q <= 1000 and Q^0.05 ~ 1.4


def test_certified_distance():
    lo, hi = certified_distance_to_integers(make_sqrt(2).affine(5, 0))  # 5*sqrt2 = 7.0710
    # high-precision reference: float(5*sqrt(2)) - 7 is already a full ulp off
    from math import isqrt

    ref = Fraction(5 * isqrt(2 << 200), 1 << 100) - 7
    assert Fraction(lo) <= ref + Fraction(1, 1 << 90)
    assert ref <= Fraction(hi) + Fraction(1, 1 << 90)
    assert hi - lo < 1e-9


def test_type_scan_phi():
    rep = type_scan([make_const("phi")], 10_000, "power")
    assert rep.max_exponent <= 1.1
    assert rep.n_points == 10_000
    # records carry certified distances
    for r in rep.records:
        assert r["distance_lo"] <= r["distance"]


def test_type_scan_pair():
    rep = type_scan(
        [make_sqrt(2).reciprocal(), make_sqrt(3).reciprocal()], 150, "power"
    )
    assert math.isfinite(rep.max_exponent)
    assert rep.n_points == 150 + 150 * (2 * 150 + 1)


def test_type_scan_subexponential():
    rep = type_scan([make_const("phi")], 10_000, "subexponential")
    assert rep.max_exponent < 0.5


def test_type_scan_alpha_and_reciprocal_both_finite():
    # empirical cross-check: the reciprocal of a badly approximable number
    # looks just as badly approximable at this scale
    a = type_scan([make_sqrt(2)], 5_000, "power")
    g = type_scan([make_sqrt(2).reciprocal()], 5_000, "power")
    assert math.isfinite(a.max_exponent) and math.isfinite(g.max_exponent)
    assert a.max_exponent < 1.5 and g.max_exponent < 1.5


def test_type_scan_rejects_rational_component():
    with pytest.raises(ValidationError):
        type_scan([make_rational(Fraction(1, 3))], 100)
