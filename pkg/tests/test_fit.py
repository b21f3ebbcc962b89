import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import optimize

from raintensity.datasets import component_failures
from raintensity.distributions import (
    ExponentiatedExponential,
    InvLogLogistic,
    InvModifiedWeibull,
    InvWeibull2,
)
from raintensity.errors import DomainError, ValidationError
from raintensity.estimate import GridSpec
from raintensity.fit import (
    FitConfig,
    _identify,
    fit_ls,
    fit_pipeline,
    mle_lambda_invllog,
    mle_lambda_invmw,
    mle_lambda_invw2,
)
from raintensity.grai import TabulatedCurve
from raintensity.sample import Sample

samples = st.lists(st.floats(0.05, 20.0), min_size=2, max_size=30)


def _curve(x, y):
    return TabulatedCurve(np.asarray(x, float), np.asarray(y, float), alpha=0.0)


# --- least squares --------------------------------------------------------------------

def test_ls_constant_is_mean():
    fit = fit_ls(_curve([1, 2, 3, 4], [3.9, 4.1, 4.0, 4.0]), "constant")
    assert fit.coefficients["A"] == pytest.approx(4.0)
    assert fit.rms == pytest.approx(math.sqrt(0.02 / 4))
    assert fit.points == 4


def test_ls_affine_exact_line():
    x = np.linspace(0.1, 2, 15)
    fit = fit_ls(_curve(x, 0.5 + 3 * x), "affine")
    assert fit.coefficients["A"] == pytest.approx(0.5, abs=1e-12)
    assert fit.coefficients["B"] == pytest.approx(3.0, abs=1e-12)
    assert fit.rms < 1e-12


def test_ls_affine_matches_polyfit():
    rng = np.random.default_rng(3)
    x = np.sort(rng.uniform(0.1, 2, 40))
    y = 1 + 2 * x + rng.normal(0, 0.1, 40)
    fit = fit_ls(_curve(x, y), "affine")
    b, a = np.polyfit(x, y, 1)
    assert fit.coefficients["A"] == pytest.approx(a, rel=1e-10)
    assert fit.coefficients["B"] == pytest.approx(b, rel=1e-10)


def test_ls_through_origin():
    fit = fit_ls(_curve([1, 2], [2, 4.2]), "through-origin")
    assert fit.coefficients["B"] == pytest.approx((2 + 8.4) / 5)


def test_ls_errors():
    with pytest.raises(ValidationError):
        fit_ls(_curve([1, 2], [1, 2]), "quadratic")
    with pytest.raises(ValidationError):
        fit_ls(TabulatedCurve(np.array([1.0]), np.array([1.0]), alpha=0.0), "affine")


# --- scale MLEs ------------------------------------------------------------------------

def _neg_loglik_lambda(dist_factory, s):
    return lambda loglam: -float(np.sum(np.log(dist_factory(math.exp(loglam)).pdf(s.values))))


def _numeric_mle(dist_factory, s, guess):
    res = optimize.minimize_scalar(_neg_loglik_lambda(dist_factory, s),
                                   bracket=(math.log(guess) - 1, math.log(guess) + 1),
                                   tol=1e-12)
    return math.exp(res.x)


def test_invllog_mle_single_and_pair():
    assert mle_lambda_invllog(Sample([2.7]), 3.0) == pytest.approx(2.7, rel=1e-12)
    assert mle_lambda_invllog(Sample([1.0, 9.0]), 1.7) == pytest.approx(3.0, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(samples, st.floats(0.3, 8.0))
def test_invllog_mle_score_equation(v, g):
    s = Sample(v)
    lam = mle_lambda_invllog(s, g)
    score = np.sum(1.0 / ((s.values / lam) ** g + 1))
    assert score == pytest.approx(s.n / 2, abs=1e-9 * s.n)


@settings(max_examples=30, deadline=None)
@given(samples, st.floats(0.3, 8.0), st.floats(0.01, 100.0))
def test_invllog_mle_scale_equivariance(v, g, c):
    s = Sample(v)
    assert mle_lambda_invllog(s.scaled(c), g) == pytest.approx(c * mle_lambda_invllog(s, g), rel=1e-9)


def test_invllog_mle_maximizes_likelihood():
    s = InvLogLogistic(4, 0.5).sample(400, 11)
    lam = mle_lambda_invllog(s, 4.0)
    assert lam == pytest.approx(_numeric_mle(lambda l: InvLogLogistic(4.0, l), s, 0.5), rel=1e-6)


def test_invmw_mle_maximizes_likelihood():
    s = component_failures()
    lam = mle_lambda_invmw(s, 0.3441, 31.6785)
    assert lam == pytest.approx(_numeric_mle(lambda l: InvModifiedWeibull(0.3441, l, 31.6785), s, 500), rel=1e-6)
    # closed form written directly
    direct = (s.n / np.sum(np.exp(-31.6785 * s.values) * s.values ** -0.3441)) ** (1 / 0.3441)
    assert lam == pytest.approx(direct, rel=1e-12)


def test_invmw_without_delta_is_invw2():
    s = InvWeibull2(1.5, 2.0).sample(200, 4)
    # invmw writes the scale as (lam/x)^gamma, invw2 as lam/x^beta
    assert mle_lambda_invmw(s, 1.5, 0.0) ** 1.5 == pytest.approx(mle_lambda_invw2(s, 1.5), rel=1e-12)
    assert mle_lambda_invw2(s, 1.5) == pytest.approx(
        _numeric_mle(lambda l: InvWeibull2(1.5, l), s, 2.0), rel=1e-6)


def test_mle_validation():
    s = Sample([1.0, 2.0])
    with pytest.raises(ValidationError):
        mle_lambda_invllog(s, 0.0)
    with pytest.raises(ValidationError):
        mle_lambda_invmw(s, -1.0, 1.0)
    with pytest.raises(ValidationError):
        mle_lambda_invmw(s, 1.0, -1.0)


# --- pipeline ---------------------------------------------------------------------------

def test_pipeline_invllog_monte_carlo():
    s = InvLogLogistic(4, 0.5).sample(1000, 88)
    rep = fit_pipeline(s, -1, "constant")
    assert isinstance(rep.family, InvLogLogistic)
    assert 3.65 <= rep.family.gamma <= 4.35
    assert 0.45 <= rep.family.lam <= 0.55
    assert rep.points == 100
    d = rep.to_dict()
    assert d["identified"]["family"] == "InvLogLogistic"
    assert set(d) >= {"ls_coefficients", "scale_estimate", "diagnostics", "bandwidth", "grid"}


def test_pipeline_invw2():
    s = InvWeibull2(2.0, 1.0).sample(2000, 7)
    rep = fit_pipeline(s, 0, "constant")
    assert isinstance(rep.family, InvWeibull2)
    assert rep.family.beta == pytest.approx(2.0, rel=0.15)
    assert rep.scale["lambda"] == pytest.approx(mle_lambda_invw2(s, rep.family.beta), rel=1e-12)


def test_pipeline_expexp():
    s = ExponentiatedExponential(1.0, 2.0).sample(2000, 9)
    rep = fit_pipeline(s, 1.0, "through-origin")
    assert isinstance(rep.family, ExponentiatedExponential)
    assert rep.family.b == pytest.approx(2.0, rel=0.2)


def test_pipeline_real_data_sample_grid():
    # grid at the observations inside the 5-95% band, published bandwidth
    rep = fit_pipeline(component_failures(), 0, "affine",
                       FitConfig(bandwidth=0.0147, grid=GridSpec(mode="sample")))
    assert rep.ls["A"] == pytest.approx(0.3441, abs=0.05)
    assert rep.ls["B"] == pytest.approx(31.6785, abs=3)
    assert isinstance(rep.family, InvModifiedWeibull)


@pytest.mark.parametrize("alpha,model", [(-1, "affine"), (0.5, "constant"), (-2, "constant"), (0, "through-origin")])
def test_pipeline_unsupported_pairs(alpha, model):
    with pytest.raises(ValidationError):
        fit_pipeline(Sample([1.0, 2.0, 3.0]), alpha, model)


@pytest.mark.parametrize("alpha,model,coef", [(0, "affine", {"A": -0.1, "B": 2.0}),
                                              (0, "affine", {"A": 1.0, "B": -2.0}),
                                              (1.0, "through-origin", {"B": -1.0})])
def test_identification_rejects_out_of_range_coefficients(alpha, model, coef):
    with pytest.raises(DomainError):
        _identify(alpha, model, coef, Sample([1.0, 2.0, 3.0]))
