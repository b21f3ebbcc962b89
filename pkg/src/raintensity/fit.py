"""Identify a lifetime family from an empirical GRAI curve.

The shape parameters come from a least-squares fit of the curve; the scale
is then profiled out by maximum likelihood with the shapes held fixed.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit, logsumexp

from .distributions import (
    ExponentiatedExponential,
    InvLogLogistic,
    InvModifiedWeibull,
    InvWeibull2,
    LifetimeDistribution,
    family_dict,
)
from .errors import DomainError, RootFindingError, ValidationError
from .estimate import GridSpec, KdeModel, grai_grid
from .grai import TabulatedCurve
from .sample import Sample

MODELS = ("constant", "affine", "through-origin")


@dataclass(frozen=True)
class LsFit:
    model: str
    coefficients: dict
    rms: float
    points: int


def fit_ls(curve: TabulatedCurve, model: str) -> LsFit:
    """Ordinary least squares of the curve values on x.

    ``constant`` -> {"A"}, ``affine`` -> {"A", "B"} (L = A + B x),
    ``through-origin`` -> {"B"} (L = B x).
    """
    x, y = np.asarray(curve.grid), np.asarray(curve.values)
    if model == "constant":
        coef = {"A": float(np.mean(y))}
        resid = y - coef["A"]
    elif model == "affine":
        if x.size < 2 or np.ptp(x) == 0:
            raise ValidationError("affine fit needs at least two distinct abscissae")
        design = np.column_stack([np.ones_like(x), x])
        (a, b), *_ = np.linalg.lstsq(design, y, rcond=None)
        coef = {"A": float(a), "B": float(b)}
        resid = y - (a + b * x)
    elif model == "through-origin":
        b = float(np.dot(x, y) / np.dot(x, x))
        coef = {"B": b}
        resid = y - b * x
    else:
        raise ValidationError(f"unknown model {model!r}; expected one of {MODELS}")
    return LsFit(model, coef, float(np.sqrt(np.mean(resid**2))), int(x.size))


def _invllog_score(logx, gamma, loglam):
    # sum_i 1 / ((x_i/lam)^gamma + 1)
    return float(np.sum(expit(-gamma * (logx - loglam))))


def mle_lambda_invllog(s: Sample, gamma_hat: float) -> float:
    """Scale MLE of the inverse log-logistic with the shape fixed.

    Solves ``sum_i 1/((x_i/lam)^gamma + 1) = N/2``; the left side increases
    strictly in lam, so a bracket is widened geometrically until it changes
    sign and then handed to Brent's method.
    """
    if not (math.isfinite(gamma_hat) and gamma_hat > 0):
        raise ValidationError("gamma_hat must be positive")
    logx = np.log(s.values)
    target = s.n / 2.0
    g = lambda ll: _invllog_score(logx, gamma_hat, ll) - target
    lo, hi = logx[0] - math.log(100.0), logx[-1] + math.log(100.0)
    for _ in range(60):
        if g(lo) < 0 < g(hi):
            break
        lo, hi = lo - (hi - lo), hi + (hi - lo)
    else:
        raise RootFindingError("could not bracket the scale MLE; gamma_hat too close to 0?")
    root = brentq(g, lo, hi, xtol=1e-14, rtol=1e-14, maxiter=500)
    return math.exp(root)


def mle_lambda_invmw(s: Sample, gamma_hat: float, delta_hat: float) -> float:
    """Closed-form scale MLE ``(N / sum exp(-delta x_i) x_i^-gamma)^(1/gamma)``, in log space."""
    if not (math.isfinite(gamma_hat) and gamma_hat > 0):
        raise ValidationError("gamma_hat must be positive")
    if not (math.isfinite(delta_hat) and delta_hat >= 0):
        raise ValidationError("delta_hat must be nonnegative")
    x = s.values
    log_sum = logsumexp(-delta_hat * x - gamma_hat * np.log(x))
    return math.exp((math.log(s.n) - log_sum) / gamma_hat)


def mle_lambda_invw2(s: Sample, beta_hat: float) -> float:
    """MLE of lam in ``exp(-lam / x^beta)`` for fixed beta: ``N / sum x_i^-beta``."""
    return math.exp(math.log(s.n) - logsumexp(-beta_hat * np.log(s.values)))


@dataclass(frozen=True)
class FitConfig:
    bandwidth: float = None
    grid: GridSpec = field(default_factory=GridSpec)


@dataclass
class FitReport:
    alpha: float
    model: str
    ls: dict
    scale: dict
    family: LifetimeDistribution
    rms: float
    points: int
    bandwidth: float
    grid: dict
    curve: TabulatedCurve = field(default=None, repr=False)

    def to_dict(self):
        return {
            "alpha": self.alpha,
            "model": self.model,
            "ls_coefficients": self.ls,
            "scale_estimate": self.scale,
            "identified": family_dict(self.family),
            "diagnostics": {"residual_rms": self.rms, "points_used": self.points},
            "bandwidth": self.bandwidth,
            "grid": self.grid,
        }


def _identify(alpha, model, coef, s):
    if alpha == -1 and model == "constant":
        g = coef["A"]
        lam = mle_lambda_invllog(s, g)
        return InvLogLogistic(g, lam), {"method": "mle", "lambda": lam}
    if alpha == 0 and model == "constant":
        beta = coef["A"]
        lam = mle_lambda_invw2(s, beta)
        return InvWeibull2(beta, lam), {"method": "mle", "lambda": lam}
    if alpha == 0 and model == "affine":
        g, d = coef["A"], coef["B"]
        if g <= 0 or d < 0:
            raise DomainError(f"fitted intercept {g:.6g} / slope {d:.6g} outside the inverse modified Weibull range")
        lam = mle_lambda_invmw(s, g, d)
        return InvModifiedWeibull(g, lam, d), {"method": "mle", "lambda": lam}
    if alpha > 0 and model == "through-origin":
        b = coef["B"]
        if b <= 0:
            raise DomainError(f"fitted slope {b:.6g} is not positive")
        return ExponentiatedExponential(alpha, b), {"method": "least-squares slope", "b": b}
    raise ValidationError(
        f"unsupported identification (alpha={alpha}, model={model}); supported: "
        "(-1, constant), (0, constant), (0, affine), (>0, through-origin)"
    )


def fit_pipeline(s: Sample, alpha: float, model: str, config: FitConfig = FitConfig()) -> FitReport:
    """KDE -> empirical GRAI curve -> least squares -> scale MLE -> family."""
    if model not in MODELS:
        raise ValidationError(f"unknown model {model!r}; expected one of {MODELS}")
    # reject unsupported pairs before doing any work
    if not ((alpha == -1 and model == "constant") or (alpha == 0 and model in ("constant", "affine"))
            or (alpha > 0 and model == "through-origin")):
        _identify(alpha, model, {}, s)
    kde = KdeModel.fit(s, config.bandwidth)
    curve = grai_grid(kde, alpha, config.grid)
    ls = fit_ls(curve, model)
    family, scale = _identify(alpha, model, ls.coefficients, s)
    grid = {"p_lo": config.grid.p_lo, "p_hi": config.grid.p_hi, "mode": config.grid.mode,
            "points": config.grid.points}
    return FitReport(alpha, model, ls.coefficients, scale, family, ls.rms, ls.points,
                     kde.bandwidth, grid, curve)
