"""Reversed hazard, alpha-generalized reversed aging intensity and friends.

The alpha-GRAI of a distribution F with density f is

    L_alpha(x) = alpha x F^(alpha-1) f / (1 - F^alpha)      (alpha != 0)
    L_0(x)     = -x f / (F log F)

All evaluations go through ``x * (f/F) * alpha / expm1(-alpha log F)``, which
is algebraically the same thing but keeps its accuracy when F is tiny, close
to one, or alpha is close to zero.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._util import as_array, finish
from .distributions import (
    ExponentiatedExponential,
    InvLogLogistic,
    InvModifiedWeibull,
    InvWeibull2,
    LifetimeDistribution,
)
from .errors import DomainError, ValidationError

CDF_FLOOR = 1e-300
SF_FLOOR = 1e-15
ALPHA_ZERO = 1e-8


def _alpha_factor(alpha, logF):
    """alpha / expm1(-alpha log F), continuously extended to -1/log F at 0."""
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        if abs(alpha) < ALPHA_ZERO:
            return -1.0 / logF
        return alpha / np.expm1(-alpha * logF)


def _interior(d: LifetimeDistribution, x, what="quantity"):
    arr, scalar = as_array(x)
    lo, hi = d.support
    if np.any((arr <= lo) | (arr >= hi)):
        raise DomainError(f"{what} undefined outside the open support {d.support}")
    logF = np.asarray(d.logcdf(arr))
    if np.any(logF < math.log(CDF_FLOOR)):
        raise DomainError(f"{what} undefined: F(x) below {CDF_FLOOR:g}")
    if np.any(-np.expm1(logF) < SF_FLOOR):
        raise DomainError(f"{what} undefined: 1 - F(x) below {SF_FLOOR:g}")
    return arr, scalar, logF


def reversed_hazard(d: LifetimeDistribution, x):
    """f(x)/F(x)."""
    arr, scalar = as_array(x)
    lo, hi = d.support
    if np.any((arr <= lo) | (arr >= hi)):
        raise DomainError("reversed hazard undefined outside the open support")
    if np.any(np.asarray(d.logcdf(arr)) < math.log(CDF_FLOOR)):
        raise DomainError("reversed hazard undefined: F(x) is zero to working precision")
    return finish(d.rhazard(arr), scalar)


def cum_reversed_hazard_alpha(d: LifetimeDistribution, alpha: float, x):
    """``W_alpha^{-1}(1 - F(x))``: (1 - F^alpha)/alpha, or -log F at alpha=0."""
    arr, scalar = as_array(x)
    lo, hi = d.support
    if np.any((arr <= lo) | (arr >= hi)):
        raise DomainError("cumulative reversed hazard requested outside the open support")
    logF = np.asarray(d.logcdf(arr))
    if alpha <= 0 and np.any(np.isneginf(logF)):
        raise DomainError("cumulative reversed hazard overflows: F(x) = 0")
    with np.errstate(over="ignore"):
        out = -logF if abs(alpha) < ALPHA_ZERO else -np.expm1(alpha * logF) / alpha
    if np.any(np.isinf(out)):
        raise DomainError("cumulative reversed hazard overflows: F(x) is too close to 0")
    return finish(out, scalar)


# --- closed forms --------------------------------------------------------

def _closed_invw2(d, alpha):
    def fn(x):
        z = d.lam * x ** -d.beta
        if abs(alpha) < ALPHA_ZERO:
            return np.full_like(z, d.beta)
        y = alpha * z
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            return d.beta * np.where(y == 0, 1.0, y / np.expm1(y))

    return fn


def closed_form(d: LifetimeDistribution, alpha: float):
    """Return a vectorised closed-form alpha-GRAI for ``d``, or ``None``."""
    if isinstance(d, InvWeibull2):
        return _closed_invw2(d, alpha)
    if isinstance(d, InvModifiedWeibull) and alpha == 0:
        return lambda x: d.gamma + d.delta * x
    if isinstance(d, InvLogLogistic) and alpha == -1:
        return lambda x: np.full_like(x, d.gamma)
    if isinstance(d, ExponentiatedExponential) and alpha == d.alpha:
        return lambda x: d.b * x
    return None


def _generic(d, alpha, x, logF=None):
    """Generic branch, switching to the hazard form once F is close to one.

    For F near 1 the reversed-hazard form multiplies an underflowing f/F by an
    overflowing factor; rewriting it as ``x h(x) S/(F (-log F)) * c`` with
    ``c = -alpha log F / expm1(-alpha log F)`` keeps every piece bounded.
    """
    x = np.asarray(x, dtype=float)
    if logF is None:
        logF = np.asarray(d.logcdf(x), dtype=float)
    out = np.empty_like(x)
    near_one = logF > -0.5
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        lo = ~near_one
        if lo.any():
            xl, ll = x[lo], logF[lo]
            vals = xl * d.rhazard(xl) * _alpha_factor(alpha, ll)
            # F underflowed: the limit is 0 for alpha > 0 and +inf for alpha < 0
            if alpha != 0:
                vals = np.where(np.isneginf(ll), 0.0 if alpha > 0 else np.inf, vals)
            out[lo] = vals
        if near_one.any():
            xh, lh = x[near_one], logF[near_one]
            logS = np.asarray(d.logsf(xh), dtype=float)
            s_over = np.where(lh < 0, np.exp(logS) / -lh, 1.0)
            y = -alpha * lh
            c = np.where(y != 0, y / np.expm1(y), 1.0)
            out[near_one] = xh * d.hazard(xh) * s_over * c / np.exp(lh)
    return out


def grai_alpha(d: LifetimeDistribution, alpha: float, x, method: str = "auto"):
    """alpha-generalized reversed aging intensity of ``d`` at ``x``.

    ``method`` is ``"auto"`` (closed form when one is known), ``"generic"``
    or ``"closed"`` (error if none exists).
    """
    arr, scalar, logF = _interior(d, x, "GRAI")
    fn = closed_form(d, alpha) if method in ("auto", "closed") else None
    if method == "closed" and fn is None:
        raise ValidationError(f"no closed form for {type(d).__name__} at alpha={alpha}")
    if method not in ("auto", "closed", "generic"):
        raise ValidationError(f"unknown method {method!r}")
    out = fn(arr) if fn is not None else _generic(d, alpha, arr, logF)
    return finish(out, scalar)


def ai_alpha(d: LifetimeDistribution, alpha: float, x):
    """alpha-generalized (forward) aging intensity."""
    arr, scalar, _ = _interior(d, x, "aging intensity")
    logS = np.asarray(d.logsf(arr))
    return finish(arr * d.hazard(arr) * _alpha_factor(alpha, logS), scalar)


def grai_plugin(alpha: float, x, f, F):
    """GRAI from supplied density and cdf values (the plug-in estimator form)."""
    x = np.asarray(x, dtype=float)
    f = np.asarray(f, dtype=float)
    F = np.asarray(F, dtype=float)
    if np.any((F <= 0) | (F >= 1)):
        raise DomainError("plug-in GRAI needs 0 < F < 1")
    out = x * f / F * _alpha_factor(alpha, np.log(F))
    return float(out) if out.ndim == 0 else out


def grai_general(F: LifetimeDistribution, G: LifetimeDistribution, x):
    """G-generalized reversed aging intensity ``x f / (g(y) y)``, ``y = G^{-1}(1 - F(x))``."""
    arr, scalar, _ = _interior(F, x, "G-generalized GRAI")
    y = np.asarray(G.quantile(np.asarray(F.sf(arr))))
    g = np.asarray(G.pdf(y))
    if np.any(g <= 0) or np.any(y <= 0):
        raise DomainError("density of G vanishes at G^{-1}(1 - F(x))")
    return finish(arr * F.pdf(arr) / (g * y), scalar)


# --- curves --------------------------------------------------------------

class GraiCurve:
    """A GRAI-shaped function of x > 0, handed to the reconstruction code."""

    alpha = None

    def __call__(self, x):
        raise NotImplementedError


@dataclass(frozen=True)
class SymbolicCurve(GraiCurve):
    """Exact alpha-GRAI of a parametric family.

    Evaluation skips the floor guards of :func:`grai_alpha` so that integrals
    can reach far into the tails.
    """

    family: LifetimeDistribution
    alpha: float

    def __call__(self, x):
        arr, scalar = as_array(x)
        fn = closed_form(self.family, self.alpha)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = fn(arr) if fn is not None else _generic(self.family, self.alpha, arr)
        return finish(np.nan_to_num(out, nan=0.0, posinf=np.inf), scalar)


@dataclass(frozen=True)
class FunctionCurve(GraiCurve):
    """User-supplied curve, e.g. ``lambda x: 4 + 0 * x``."""

    fn: object
    alpha: float = None
    label: str = ""

    def __call__(self, x):
        arr, scalar = as_array(x)
        return finish(np.broadcast_to(self.fn(arr), arr.shape), scalar)


@dataclass(frozen=True)
class TabulatedCurve(GraiCurve):
    """Curve known on a grid, interpolated linearly in (log x, value).

    Outside the grid the end values are held constant; :meth:`outside`
    flags such points.
    """

    grid: np.ndarray
    values: np.ndarray
    alpha: float = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float).ravel()
        v = np.asarray(self.values, dtype=float).ravel()
        if g.size < 2 or g.size != v.size:
            raise ValidationError("tabulated curve needs >= 2 points and matching lengths")
        if not (np.all(np.isfinite(g)) and np.all(np.isfinite(v))):
            raise ValidationError("tabulated curve must be finite")
        if np.any(g <= 0) or np.any(np.diff(g) <= 0):
            raise ValidationError("grid must be positive and strictly increasing")
        if np.any(v < 0):
            raise ValidationError("GRAI values must be nonnegative")
        for a in (g, v):
            a.setflags(write=False)
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    @property
    def log_grid(self):
        return np.log(self.grid)

    def __call__(self, x):
        arr, scalar = as_array(x)
        return finish(np.interp(np.log(arr), self.log_grid, self.values), scalar)

    def outside(self, x):
        arr = np.asarray(x, dtype=float)
        return (arr < self.grid[0]) | (arr > self.grid[-1])

    def log_integral(self, lo: float, hi: float) -> float:
        """Exact ``int_lo^hi L(t)/t dt`` of the interpolant (signed)."""
        if lo > hi:
            return -self.log_integral(hi, lo)
        u = self.log_grid
        a, b = math.log(lo), math.log(hi)
        inner = u[(u > a) & (u < b)]
        knots = np.concatenate(([a], inner, [b]))
        vals = np.interp(knots, u, self.values)
        return float(np.sum(np.diff(knots) * (vals[1:] + vals[:-1]) / 2.0))


def tabulate(d: LifetimeDistribution, alpha: float, grid) -> TabulatedCurve:
    grid = np.asarray(grid, dtype=float)
    return TabulatedCurve(grid, grai_alpha(d, alpha, grid), alpha=alpha)


def write_curve(path_or_file, curve: TabulatedCurve, column: str = "L"):
    """Write ``# grai alpha=<a>`` header and ``x<TAB>L`` rows (17 significant digits)."""
    alpha = "none" if curve.alpha is None else f"{curve.alpha:.17g}"
    lines = [f"# grai alpha={alpha}", f"x\t{column}"]
    lines += [f"{x:.17g}\t{v:.17g}" for x, v in zip(curve.grid, curve.values)]
    text = "\n".join(lines) + "\n"
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w") as fh:
            fh.write(text)


def read_curve(path) -> TabulatedCurve:
    alpha = None
    xs, vs = [], []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if "alpha=" in line:
                    raw = line.split("alpha=", 1)[1].split()[0]
                    alpha = None if raw.lower() == "none" else float(raw)
                continue
            parts = line.split("\t")
            try:
                x, v = float(parts[0]), float(parts[1])
            except (ValueError, IndexError):
                if not xs and lineno <= 2:
                    continue  # column header
                raise ValidationError(f"{path}: line {lineno} is not 'x<TAB>L'") from None
            xs.append(x)
            vs.append(v)
    return TabulatedCurve(np.array(xs), np.array(vs), alpha=alpha)
