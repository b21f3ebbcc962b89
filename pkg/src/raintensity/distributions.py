"""Parametric lifetime distributions.

Every family exposes vectorised ``cdf``/``pdf``/``quantile`` plus the
log-scale and rate functions (``logcdf``, ``logsf``, ``rhazard``, ``hazard``)
that the intensity code needs to stay accurate deep in the tails.  Outside
the support ``cdf`` clamps to 0 or 1 and ``pdf`` is 0.
"""

import math
import re
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import lambertw

from ._util import as_array, finish, log1mexp
from .errors import ValidationError
from .sample import Sample


def _z_over_1mexp(z):
    """z / (1 - exp(-z)), equal to 1 at z = 0."""
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(z == 0, 1.0, z / -np.expm1(-z))


def _check_positive(name, value, allow_zero=False):
    if not isinstance(value, (int, float, np.floating, np.integer)) or not math.isfinite(value):
        raise ValidationError(f"{name} must be a finite real, got {value!r}")
    if value < 0 or (value == 0 and not allow_zero):
        bound = ">= 0" if allow_zero else "> 0"
        raise ValidationError(f"{name} must be {bound}, got {value!r}")


class LifetimeDistribution:
    """Base class for distributions of positive random variables.

    Subclasses implement ``_pdf``, ``_quantile`` and at least one of
    ``_logcdf``/``_logsf`` on points strictly inside the support.
    """

    @property
    def support(self):
        return (0.0, math.inf)

    # --- internals, overridden per family -------------------------------
    def _logcdf(self, x):
        return log1mexp(self._logsf(x))

    def _logsf(self, x):
        return log1mexp(self._logcdf(x))

    def _rhazard(self, x):
        return self._pdf(x) / np.exp(self._logcdf(x))

    def _hazard(self, x):
        return self._pdf(x) / np.exp(self._logsf(x))

    def _pdf_at_lower(self):
        return 0.0

    # --- public API ------------------------------------------------------
    def _split(self, x):
        arr, scalar = as_array(x)
        if not np.all(np.isfinite(arr)):
            raise ValidationError("x must be finite")
        lo, hi = self.support
        return arr, scalar, (arr > lo) & (arr < hi), arr <= lo

    def logcdf(self, x):
        arr, scalar, inside, below = self._split(x)
        out = np.where(below, -np.inf, 0.0)
        if inside.any():
            out[inside] = self._logcdf(arr[inside])
        return finish(out, scalar)

    def logsf(self, x):
        arr, scalar, inside, below = self._split(x)
        out = np.where(below, 0.0, -np.inf)
        if inside.any():
            out[inside] = self._logsf(arr[inside])
        return finish(out, scalar)

    def cdf(self, x):
        return finish(np.exp(self.logcdf(x)), np.ndim(x) == 0)

    def sf(self, x):
        return finish(np.exp(self.logsf(x)), np.ndim(x) == 0)

    def pdf(self, x):
        arr, scalar, inside, _ = self._split(x)
        out = np.zeros_like(arr)
        if inside.any():
            out[inside] = self._pdf(arr[inside])
        out[arr == self.support[0]] = self._pdf_at_lower()
        return finish(out, scalar)

    def _rate(self, x, fn):
        arr, scalar, inside, _ = self._split(x)
        out = np.full_like(arr, np.nan)
        if inside.any():
            out[inside] = fn(arr[inside])
        return finish(out, scalar)

    def rhazard(self, x):
        """Reversed hazard rate f/F (NaN outside the open support)."""
        return self._rate(x, self._rhazard)

    def hazard(self, x):
        """Hazard rate f/(1-F) (NaN outside the open support)."""
        return self._rate(x, self._hazard)

    def quantile(self, p):
        arr, scalar = as_array(p)
        if not np.all((arr > 0) & (arr < 1)):
            raise ValidationError("quantile requires p in (0, 1)")
        return finish(self._quantile(arr), scalar)

    def sample(self, n: int, seed: int) -> Sample:
        """Draw ``n`` observations by inverse transform, ``Y = F^{-1}(1 - U)``."""
        if int(n) != n or n < 1:
            raise ValidationError(f"sample size must be a positive integer, got {n!r}")
        rng = np.random.Generator(np.random.Philox(seed))
        u = rng.random(int(n))
        return Sample(inverse_transform(self, u), source=f"{family_spec(self)} seed={seed}")


def inverse_transform(d: LifetimeDistribution, u):
    """Map standard-uniform draws ``u`` to ``F^{-1}(1 - u)``."""
    v = 1.0 - np.asarray(u, dtype=float)
    v = np.clip(v, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))
    return d.quantile(v)


@dataclass(frozen=True)
class GeneralizedPareto(LifetimeDistribution):
    """W_alpha: ``1 - (1 - alpha x)^(1/alpha)``, the exponential at alpha=0."""

    alpha: float

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise ValidationError("alpha must be finite")

    @property
    def support(self):
        return (0.0, 1.0 / self.alpha) if self.alpha > 0 else (0.0, math.inf)

    def _logsf(self, x):
        if self.alpha == 0:
            return -x
        return np.log1p(-self.alpha * x) / self.alpha

    def _pdf(self, x):
        a = self.alpha
        if a == 0:
            return np.exp(-x)
        return np.exp((1.0 - a) / a * np.log1p(-a * x))

    def _hazard(self, x):
        return 1.0 / (1.0 - self.alpha * x)

    def _pdf_at_lower(self):
        return 1.0

    def _quantile(self, p):
        a = self.alpha
        if a == 0:
            return -np.log1p(-p)
        return -np.expm1(a * np.log1p(-p)) / a


@dataclass(frozen=True)
class Exponential(LifetimeDistribution):
    b: float

    def __post_init__(self):
        _check_positive("b", self.b)

    def _logsf(self, x):
        return -self.b * x

    def _pdf(self, x):
        return self.b * np.exp(-self.b * x)

    def _hazard(self, x):
        return np.full_like(x, self.b)

    def _rhazard(self, x):
        return self.b / np.expm1(self.b * x)

    def _pdf_at_lower(self):
        return float(self.b)

    def _quantile(self, p):
        return -np.log1p(-p) / self.b


@dataclass(frozen=True)
class InvWeibull2(LifetimeDistribution):
    """Inverse two-parameter Weibull, ``F(x) = exp(-lam / x**beta)``."""

    beta: float
    lam: float

    def __post_init__(self):
        _check_positive("beta", self.beta)
        _check_positive("lambda", self.lam)

    def _logcdf(self, x):
        return -self.lam * x ** -self.beta

    def _rhazard(self, x):
        return self.lam * self.beta * x ** (-self.beta - 1.0)

    def _pdf(self, x):
        return self._rhazard(x) * np.exp(self._logcdf(x))

    def _hazard(self, x):
        z = self.lam * x ** -self.beta
        return self.beta / x * np.exp(-z) * _z_over_1mexp(z)

    def _quantile(self, p):
        return (self.lam / -np.log(p)) ** (1.0 / self.beta)


@dataclass(frozen=True)
class InvLogLogistic(LifetimeDistribution):
    """Inverse log-logistic, ``F(x) = 1 / (1 + (lam/x)**gamma)``."""

    gamma: float
    lam: float

    def __post_init__(self):
        _check_positive("gamma", self.gamma)
        _check_positive("lambda", self.lam)

    def _t(self, x):
        return self.gamma * (math.log(self.lam) - np.log(x))

    def _logcdf(self, x):
        return -np.logaddexp(0.0, self._t(x))

    def _logsf(self, x):
        return -np.logaddexp(0.0, -self._t(x))

    def _pdf(self, x):
        t = self._t(x)
        return self.gamma / x * np.exp(-np.logaddexp(0.0, t) - np.logaddexp(0.0, -t))

    def _rhazard(self, x):
        return self.gamma / x * np.exp(self._logsf(x))

    def _hazard(self, x):
        return self.gamma / x * np.exp(self._logcdf(x))

    def _quantile(self, p):
        return self.lam * np.exp((np.log(p) - np.log1p(-p)) / self.gamma)


def _lambertw_exp(z):
    """Principal-branch W(exp(z)) for real z, without overflowing exp(z)."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = z < 500.0
    if small.any():
        out[small] = lambertw(np.exp(z[small])).real
    if (~small).any():
        zz = z[~small]
        w = zz - np.log(zz)
        for _ in range(50):
            step = (w + np.log(w) - zz) / (1.0 + 1.0 / w)
            w = w - step
            if np.all(np.abs(step) <= 1e-15 * np.abs(w)):
                break
        out[~small] = w
    return out


@dataclass(frozen=True)
class InvModifiedWeibull(LifetimeDistribution):
    """Inverse modified Weibull, ``F(x) = exp[-(lam/x)**gamma * exp(-delta x)]``."""

    gamma: float
    lam: float
    delta: float = 0.0

    def __post_init__(self):
        _check_positive("gamma", self.gamma)
        _check_positive("lambda", self.lam)
        _check_positive("delta", self.delta, allow_zero=True)

    def _s(self, x):
        return np.exp(self.gamma * (math.log(self.lam) - np.log(x)) - self.delta * x)

    def _logcdf(self, x):
        return -self._s(x)

    def _rhazard(self, x):
        return self._s(x) * (self.gamma / x + self.delta)

    def _pdf(self, x):
        s = self._s(x)
        return s * (self.gamma / x + self.delta) * np.exp(-s)

    def _hazard(self, x):
        s = self._s(x)
        return (self.gamma / x + self.delta) * np.exp(-s) * _z_over_1mexp(s)

    def _quantile(self, p):
        # (lam/x)^g exp(-d x) = c  <=>  x = (g/d) W((d/g) lam c^(-1/g))
        logc = np.log(-np.log(p))
        g, d = self.gamma, self.delta
        if d == 0:
            return self.lam * np.exp(-logc / g)
        z = math.log(d / g) + math.log(self.lam) - logc / g
        return g / d * _lambertw_exp(z)


@dataclass(frozen=True)
class ExponentiatedExponential(LifetimeDistribution):
    """``F(x) = (1 - exp(-b x))**(1/alpha)``; its alpha-GRAI is exactly ``b x``."""

    alpha: float
    b: float

    def __post_init__(self):
        _check_positive("alpha", self.alpha)
        _check_positive("b", self.b)

    def _logcdf(self, x):
        return log1mexp(-self.b * x) / self.alpha

    def _pdf(self, x):
        a = self.alpha
        return np.exp((1.0 / a - 1.0) * log1mexp(-self.b * x) - self.b * x) * self.b / a

    def _rhazard(self, x):
        return self.b / (self.alpha * np.expm1(self.b * x))

    def _hazard(self, x):
        # b (t/alpha)(1-t)^(1/alpha-1) / (1 - (1-t)^(1/alpha)) with t = e^{-bx}; -> b as t -> 0
        a = self.alpha
        t = np.exp(-self.b * x)
        with np.errstate(divide="ignore", invalid="ignore"):
            # log(1-t): log1p is exact for small t, log(-expm1) for t near 1
            log1mt = np.where(t < 0.5, np.log1p(-t), np.log(-np.expm1(-self.b * x)))
            ratio = (t / a) * np.exp((1.0 / a - 1.0) * log1mt) / -np.expm1(log1mt / a)
        return self.b * np.where(t == 0, 1.0, ratio)

    def _pdf_at_lower(self):
        if self.alpha == 1:
            return float(self.b)
        return 0.0 if self.alpha < 1 else math.inf

    def _quantile(self, p):
        return -log1mexp(self.alpha * np.log(p)) / self.b


@dataclass(frozen=True)
class Reciprocal(LifetimeDistribution):
    """Law of ``1/X`` for ``X ~ base``."""

    base: LifetimeDistribution

    @property
    def support(self):
        lo, hi = self.base.support
        return (0.0 if math.isinf(hi) else 1.0 / hi, math.inf if lo == 0 else 1.0 / lo)

    def _logcdf(self, x):
        return self.base._logsf(1.0 / x)

    def _logsf(self, x):
        return self.base._logcdf(1.0 / x)

    def _pdf(self, x):
        return self.base._pdf(1.0 / x) / x**2

    def _rhazard(self, x):
        return self.base._hazard(1.0 / x) / x**2

    def _hazard(self, x):
        return self.base._rhazard(1.0 / x) / x**2

    def _quantile(self, p):
        return 1.0 / self.base._quantile(1.0 - p)


# --- textual family specifications ----------------------------------------

_FAMILIES = {
    "gpd": (GeneralizedPareto, {"alpha": "alpha"}),
    "exp": (Exponential, {"b": "b"}),
    "invw2": (InvWeibull2, {"beta": "beta", "lambda": "lam"}),
    "invllog": (InvLogLogistic, {"gamma": "gamma", "lambda": "lam"}),
    "invmw": (InvModifiedWeibull, {"gamma": "gamma", "lambda": "lam", "delta": "delta"}),
    "expexp": (ExponentiatedExponential, {"alpha": "alpha", "b": "b"}),
}

_SPEC_RE = re.compile(r"^\s*([a-z0-9]+)\s*\((.*)\)\s*$", re.IGNORECASE | re.DOTALL)


def parse_family(text: str) -> LifetimeDistribution:
    """Build a family from e.g. ``"invllog(gamma=4, lambda=0.5)"``.

    Names and keys are case-insensitive; parameters are keyword-only.
    """
    m = _SPEC_RE.match(text)
    if not m:
        raise ValidationError(f"malformed family specification: {text!r}")
    name = m.group(1).lower()
    if name not in _FAMILIES:
        raise ValidationError(f"unknown family {name!r}; expected one of {sorted(_FAMILIES)}")
    cls, keys = _FAMILIES[name]
    kwargs = {}
    body = m.group(2).strip()
    for item in filter(None, (s.strip() for s in body.split(","))) if body else []:
        if "=" not in item:
            raise ValidationError(f"parameter {item!r} must be given as key=value")
        key, raw = (s.strip() for s in item.split("=", 1))
        key = key.lower()
        if key not in keys:
            raise ValidationError(f"{name} has no parameter {key!r}; expected {sorted(keys)}")
        try:
            kwargs[keys[key]] = float(raw)
        except ValueError:
            raise ValidationError(f"parameter {key} is not a number: {raw!r}") from None
    missing = [k for k, attr in keys.items() if attr not in kwargs and not (name == "invmw" and k == "delta")]
    if missing:
        raise ValidationError(f"{name} is missing parameter(s) {missing}")
    return cls(**kwargs)


def family_spec(d: LifetimeDistribution) -> str:
    """Inverse of :func:`parse_family` for catalog members."""
    for name, (cls, keys) in _FAMILIES.items():
        if type(d) is cls:
            params = ",".join(f"{k}={getattr(d, attr)!r}" for k, attr in keys.items())
            return f"{name}({params})"
    if isinstance(d, Reciprocal):
        return f"reciprocal[{family_spec(d.base)}]"
    return type(d).__name__


def family_dict(d: LifetimeDistribution) -> dict:
    return {"family": type(d).__name__, "spec": family_spec(d), "params": asdict(d) if not isinstance(d, Reciprocal) else {}}


def quantile_grid(dists, n: int = 200, p_lo: float = 0.001, p_hi: float = 0.999, log: bool = True):
    """Grid over the band shared by the interior quantile ranges of ``dists``."""
    if isinstance(dists, LifetimeDistribution):
        dists = [dists]
    lo = max(float(d.quantile(p_lo)) for d in dists)
    hi = min(float(d.quantile(p_hi)) for d in dists)
    if not lo < hi:
        raise ValidationError("interior quantile bands do not overlap")
    if log:
        return np.geomspace(lo, hi, n)
    return np.linspace(lo, hi, n)
