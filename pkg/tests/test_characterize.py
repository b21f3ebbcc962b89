import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import CATALOG, ids, interior_grid
from raintensity.characterize import (
    Anchor,
    ReconstructedCdf,
    check_conditions,
    integral_from_zero,
    integrate_curve,
    matching_anchor,
    reconstruct,
    reconstruct_neg,
    reconstruct_pos,
    reconstruct_zero,
    roundtrip_error,
)
from raintensity.distributions import (
    ExponentiatedExponential,
    Exponential,
    GeneralizedPareto,
    InvLogLogistic,
    InvModifiedWeibull,
    InvWeibull2,
)
from raintensity.errors import ConditionError, ValidationError
from raintensity.grai import FunctionCurve, SymbolicCurve, TabulatedCurve, tabulate


def const(A):
    return FunctionCurve(lambda x: A + 0.0 * x)


def linear(A, B):
    return FunctionCurve(lambda x: A + B * x)


# --- conditions -----------------------------------------------------------------

def test_conditions_constant_negative_alpha():
    rep = check_conditions(const(2.5), -1.0)
    assert (rep.c1, rep.c2, rep.c3) == ("pass", "pass", "pass")
    assert rep.ok and rep.lower_tail == "infinite" and rep.upper_tail == "infinite"


def test_conditions_constant_positive_alpha_fails_c2():
    rep = check_conditions(const(2.5), 1.0)
    assert rep.c2 == "fail" and rep.c1 == "pass" and rep.c3 == "pass"
    assert not rep.ok


def test_conditions_linear_positive_alpha():
    rep = check_conditions(linear(0.0, 1.0), 1.0)
    assert (rep.c1, rep.c2, rep.c3) == ("pass", "pass", "pass")
    assert rep.lower_tail == "finite"


def test_conditions_negative_values_fail_c1():
    rep = check_conditions(FunctionCurve(lambda x: np.sin(np.log(x)) + 0.5), -1.0)
    assert rep.c1 == "fail"


def test_conditions_report_dict():
    d = check_conditions(const(1.0), 0.0, a=2.0).to_dict()
    assert d["anchor"] == 2.0 and d["alpha"] == 0.0 and set(d) >= {"c1", "c2", "c3"}


CONDITION_CASES = [(d, a) for d in CATALOG if not isinstance(d, GeneralizedPareto) or d.alpha <= 0
                   for a in (-2.0, -0.5, 0.0, 0.5, 2.0)]


@pytest.mark.parametrize("d, alpha", CONDITION_CASES[::3], ids=[f"{ids(d)}-{a}" for d, a in CONDITION_CASES[::3]])
def test_exact_curves_satisfy_conditions(d, alpha):
    rep = check_conditions(SymbolicCurve(d, alpha), alpha, a=float(d.quantile(0.5)))
    assert rep.ok, rep


# --- reconstruction: closed-form oracles -------------------------------------------

@pytest.mark.parametrize("alpha, k", [(-1.0, 1.0), (-2.0, 0.3), (-0.5, 4.0)])
def test_neg_at_anchor(alpha, k):
    assert reconstruct_neg(const(3.0), alpha, Anchor(1.7, k), 1.7) == pytest.approx((1 - k * alpha) ** (1 / alpha), rel=1e-14)


def test_neg_constant_curve_value():
    assert reconstruct_neg(const(4.0), -1.0, Anchor(1.0, 1.0), 1.0) == pytest.approx(0.5, rel=1e-14)
    # F = [1 + (a/x)^A]^-1 away from the anchor
    x = np.geomspace(0.2, 5, 9)
    np.testing.assert_allclose(reconstruct_neg(const(4.0), -1.0, Anchor(1.0, 1.0), x), 1 / (1 + x**-4.0), rtol=1e-10)


@pytest.mark.parametrize("a", [0.7, 1.0, 2.0])
def test_neg_invweibull_family(a):
    alpha, beta, lam, k = -1.0, 2.0, 1.0, 1.0
    curve = SymbolicCurve(InvWeibull2(beta, lam), alpha)
    x = np.geomspace(0.2, 20, 40)
    num = np.exp(-lam * alpha / x**beta) - 1
    den = math.exp(-lam * alpha / a**beta) - 1
    want = (1 - k * alpha * num / den) ** (1 / alpha)
    np.testing.assert_allclose(reconstruct_neg(curve, alpha, Anchor(a, k), x), want, rtol=1e-9)


def test_zero_constant_curve():
    x = np.geomspace(0.1, 10, 25)
    np.testing.assert_allclose(reconstruct_zero(const(2.0), Anchor(1.0, 1.0), x), np.exp(-x**-2.0), rtol=1e-10)
    assert reconstruct_zero(const(2.0), Anchor(3.0, 0.4), 3.0) == pytest.approx(math.exp(-0.4), rel=1e-15)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.2, 4), st.floats(0.0, 5), st.floats(0.3, 3), st.floats(0.1, 5))
def test_zero_affine_curve_property(A, B, a, k):
    x = np.geomspace(0.3, 3, 7)
    want = np.exp(-k * (a / x) ** A * np.exp(-B * (x - a)))
    got = reconstruct_zero(linear(A, B), Anchor(a, k), x)
    np.testing.assert_allclose(got, want, rtol=1e-8, atol=1e-300)


def test_pos_linear_curve():
    assert reconstruct_pos(linear(0.0, 1.0), 1.0, math.log(2)) == pytest.approx(0.5, rel=1e-10)
    x = np.geomspace(0.05, 5, 15)
    np.testing.assert_allclose(reconstruct_pos(linear(0, 1.3), 2.0, x), (-np.expm1(-1.3 * x)) ** 0.5, rtol=1e-10)
    assert reconstruct_pos(linear(0, 1.0), 2.0, 1e-12) < 1e-5


def test_pos_invweibull_is_unique():
    curve = SymbolicCurve(InvWeibull2(2.0, 1.0), 2.0)
    x = np.geomspace(0.3, 20, 30)
    np.testing.assert_allclose(reconstruct_pos(curve, 2.0, x), np.exp(-1 / x**2), rtol=1e-9, atol=1e-12)


def test_pos_independent_subdivisions_agree():
    curve = SymbolicCurve(InvLogLogistic(4.0, 0.5), 1.0)
    x = interior_grid(InvLogLogistic(4.0, 0.5), 20)
    one = ReconstructedCdf(curve, 1.0, width=1.0)(x)
    two = ReconstructedCdf(curve, 1.0, width=0.37)(x)
    assert np.max(np.abs(one - two)) < 2e-9


def test_pos_divergent_lower_tail_is_condition_error():
    with pytest.raises(ConditionError):
        reconstruct_pos(const(1.0), 1.0, 1.0)


def test_wrong_sign_and_missing_anchor():
    with pytest.raises(ValidationError):
        reconstruct_neg(const(1.0), 0.5, Anchor(1, 1), 1.0)
    with pytest.raises(ValidationError):
        reconstruct_pos(const(1.0), -0.5, 1.0)
    with pytest.raises(ValidationError):
        ReconstructedCdf(const(1.0), -1.0)
    with pytest.raises(ValidationError):
        reconstruct(const(1.0), 0.0, -1.0, Anchor(1, 1))


@pytest.mark.parametrize("a, k", [(0, 1), (-1, 1), (1, 0), (1, float("inf")), (float("nan"), 1)])
def test_anchor_validation(a, k):
    with pytest.raises(ValidationError):
        Anchor(a, k)


def test_negative_curve_at_query_is_condition_error():
    with pytest.raises(ConditionError):
        ReconstructedCdf(FunctionCurve(lambda x: 1.0 - x), -1.0, Anchor(1.0))(3.0)


# --- invariants -------------------------------------------------------------------

@pytest.mark.parametrize("alpha", [-2.0, -1.0, -0.5, 0.0])
def test_anchor_invariance(alpha):
    d = InvLogLogistic(3.0, 1.4)
    curve = SymbolicCurve(d, alpha)
    x = interior_grid(d, 40)
    a, b, k = 0.8, 2.5, 0.7
    # moving the anchor from a to b rescales k by exp(-int_a^b L/t)
    kb = k * math.exp(-integrate_curve(curve, a, b))
    Fa = ReconstructedCdf(curve, alpha, Anchor(a, k))(x)
    Fb = ReconstructedCdf(curve, alpha, Anchor(b, kb))(x)
    assert np.max(np.abs(Fa - Fb)) < 1e-9


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([-2.0, -1.0, -0.3, 0.0, 0.5, 1.5]), st.lists(st.floats(0.05, 20), min_size=2, max_size=12))
def test_reconstruction_monotone_and_bounded(alpha, xs):
    d = InvWeibull2(1.5, 2.0)
    anchor = Anchor(1.0, 0.8) if alpha <= 0 else None
    xs = np.sort(np.array(xs))
    F = ReconstructedCdf(SymbolicCurve(d, alpha), alpha, anchor)(xs)
    assert np.all((F >= 0) & (F <= 1))
    assert np.all(np.diff(F) >= -1e-15)


def test_cache_reuse_is_consistent():
    d = InvLogLogistic(4.0, 0.5)
    rc = ReconstructedCdf(SymbolicCurve(d, -1.0), -1.0, matching_anchor(d, -1.0, 0.5))
    x = interior_grid(d, 30)
    first = rc(x)
    again = rc(x[::-1])[::-1]
    np.testing.assert_array_equal(first, again)
    assert len(rc._keys) == 31


RT_CASES = [(d, a) for d in CATALOG for a in (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)]


@pytest.mark.parametrize("d, alpha", RT_CASES, ids=[f"{ids(d)}-{a}" for d, a in RT_CASES])
def test_roundtrip_catalog(d, alpha):
    if isinstance(d, GeneralizedPareto) and d.alpha > 0:
        pytest.skip("bounded support: the upper-tail condition does not apply")
    curve = SymbolicCurve(d, alpha)
    med = float(d.quantile(0.5))
    if alpha > 0:
        # the lower-tail verdict is the only condition the reconstruction itself needs
        integral_from_zero(curve, med)
    assert roundtrip_error(d, alpha, interior_grid(d, 40)) < 1e-6


def test_roundtrip_examples():
    assert roundtrip_error(InvWeibull2(2, 1), 1.0, interior_grid(InvWeibull2(2, 1), 200)) < 1e-6
    assert roundtrip_error(InvLogLogistic(4, 0.5), -1.0, interior_grid(InvLogLogistic(4, 0.5), 200)) < 1e-6
    assert roundtrip_error(Exponential(1), 0.0, interior_grid(Exponential(1), 200)) < 1e-6
    with pytest.raises(ValidationError):
        roundtrip_error(Exponential(1), 0.0, [1e-6, 1.0])


def test_matching_anchor_identity():
    d = InvModifiedWeibull(0.5, 2.0, 0.8)
    for alpha in (-1.5, 0.0):
        anc = matching_anchor(d, alpha, 1.3)
        F_a = float(d.cdf(1.3))
        if alpha == 0:
            assert anc.k == pytest.approx(-math.log(F_a))
        else:
            assert anc.k * alpha == pytest.approx(1 - F_a**alpha)


# --- tabulated curves -----------------------------------------------------------

def test_tabulated_integral_is_exact():
    c = TabulatedCurve([0.5, 1.0, 4.0], [2.0, 2.0, 6.0])
    # piecewise linear in u = log x: constant 2 on [log .5, 0], then 2 -> 6 over [0, log 4]
    want = 2 * math.log(2) + 4 * math.log(4)
    assert integrate_curve(c, 0.5, 4.0) == pytest.approx(want, rel=1e-14)
    assert integrate_curve(c, 4.0, 0.5) == pytest.approx(-want, rel=1e-14)


def test_tabulated_reconstruction_matches_symbolic():
    d = ExponentiatedExponential(1.5, 2.0)
    x = interior_grid(d, 2000, 1e-4, 1 - 1e-6)
    tab = tabulate(d, -1.0, x)
    anchor = matching_anchor(d, -1.0, float(d.quantile(0.5)))
    probe = interior_grid(d, 30, 0.01, 0.99)
    got = ReconstructedCdf(tab, -1.0, anchor)(probe)
    assert np.max(np.abs(got - d.cdf(probe))) < 1e-5
