"""Distribution functions recovered from an alpha-GRAI curve.

With ``I(a, x) = int_a^x L(t)/t dt``:

* alpha < 0:  F_k(x) = [1 - k alpha exp(-I(a, x))]^(1/alpha)   (a family in k)
* alpha = 0:  F_k(x) = exp[-k exp(-I(a, x))]
* alpha > 0:  F(x)   = [1 - exp(-I(0, x))]^(1/alpha)           (unique)

Integrals are taken in u = log t, where ``L(t)/t dt = L(e^u) du``.
"""

import bisect
import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate

from ._util import as_array, finish
from .distributions import LifetimeDistribution
from .errors import ConditionError, QuadratureError, ValidationError
from .grai import GraiCurve, SymbolicCurve, TabulatedCurve

DEFAULT_TOL = 1e-9
NEGLIGIBLE_PANEL = 1e-14
DIVERGENCE_LEVEL = 1e3
LOG_T_MIN = math.log(1e-300)
LOG_T_MAX = math.log(1e300)


@dataclass(frozen=True)
class Anchor:
    a: float
    k: float = 1.0

    def __post_init__(self):
        for name in ("a", "k"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValidationError(f"anchor {name} must be a positive real, got {v!r}")


@dataclass(frozen=True)
class ConditionReport:
    alpha: float
    c1: str
    c2: str
    c3: str
    lower_tail: str
    upper_tail: str
    anchor: float

    @property
    def ok(self) -> bool:
        return "fail" not in (self.c1, self.c2, self.c3)

    def to_dict(self):
        return asdict(self)


def _panel(curve, u0, u1, tol, strict=True):
    f = lambda u: float(curve(math.exp(u)))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err, *rest = integrate.quad(f, u0, u1, epsabs=tol, epsrel=1e-12, limit=200, full_output=1)
    if not math.isfinite(val):
        return val
    if strict and rest and len(rest) > 1 and err > 10 * max(tol, 1e-11 * abs(val)):
        raise QuadratureError(f"quadrature did not converge on [{math.exp(u0):g}, {math.exp(u1):g}]: {rest[1]}")
    return val


def integrate_curve(curve: GraiCurve, lo: float, hi: float, tol: float = DEFAULT_TOL) -> float:
    """Signed ``int_lo^hi L(t)/t dt``."""
    if not (lo > 0 and hi > 0):
        raise ValidationError("integration limits must be positive")
    if isinstance(curve, TabulatedCurve):
        return curve.log_integral(lo, hi)
    if lo == hi:
        return 0.0
    sign = 1.0
    if lo > hi:
        lo, hi, sign = hi, lo, -1.0
    u0, u1 = math.log(lo), math.log(hi)
    edges = np.linspace(u0, u1, max(1, int(math.ceil((u1 - u0) / 2.0))) + 1)
    total = sum(_panel(curve, edges[i], edges[i + 1], tol) for i in range(len(edges) - 1))
    if not math.isfinite(total):
        raise QuadratureError(f"integral over [{lo:g}, {hi:g}] is not finite")
    return sign * total


def _walk(curve, start, direction, tol, width=1.0):
    """Integrate outwards from ``start`` in unit log-panels.

    Returns ``(verdict, total)`` with verdict ``finite``, ``infinite`` or
    ``inconclusive``.
    """
    if isinstance(curve, TabulatedCurve):
        end_value = curve.values[0] if direction < 0 else curve.values[-1]
        edge = curve.grid[0] if direction < 0 else curve.grid[-1]
        if end_value > 0:
            return "infinite", math.inf
        inner = curve.log_integral(edge, start) if direction < 0 else curve.log_integral(start, edge)
        return "finite", max(inner, 0.0) if direction < 0 else inner
    u = math.log(start)
    total, quiet, last, steps = 0.0, 0, math.inf, 0
    while LOG_T_MIN < u < LOG_T_MAX:
        # unit panels near the start, wider ones further out
        nxt = u + direction * (width if steps < 16 else 4 * width)
        steps += 1
        lo, hi = sorted((u, nxt))
        # trend detection only; far-tail roundoff must not abort the walk
        last = _panel(curve, lo, hi, min(tol, 1e-12), strict=False)
        if not math.isfinite(last):
            return "infinite", math.inf
        total += last
        quiet = quiet + 1 if abs(last) < NEGLIGIBLE_PANEL else 0
        if quiet >= 3:
            return "finite", total
        if total > DIVERGENCE_LEVEL:
            return "infinite", total
        u = nxt
    return ("infinite" if last > 1e-6 else "inconclusive"), total


def integral_from_zero(curve: GraiCurve, x: float, tol: float = DEFAULT_TOL, width: float = 1.0) -> float:
    """``int_0^x L(t)/t dt``; raises :class:`ConditionError` if it diverges."""
    verdict, total = _walk(curve, x, -1, tol, width)
    if verdict != "finite":
        raise ConditionError(
            f"int_0^x L(t)/t dt is {verdict} (partial value {total:.6g}); "
            "the curve is not an alpha-GRAI for alpha > 0"
        )
    return total


def check_conditions(curve: GraiCurve, alpha: float, a: float = None, grid=None) -> ConditionReport:
    """Check the admissibility conditions of the characterization theorems.

    c1: 0 <= L < inf on the evaluation grid.
    c2: int_x^a L/t -> +inf as x -> 0 (alpha <= 0) or stays finite (alpha > 0).
    c3: int_a^x L/t -> +inf as x -> inf.
    """
    if a is None:
        a = math.sqrt(curve.grid[0] * curve.grid[-1]) if isinstance(curve, TabulatedCurve) else 1.0
    if grid is None:
        grid = curve.grid if isinstance(curve, TabulatedCurve) else a * np.geomspace(1e-6, 1e6, 241)
    with np.errstate(all="ignore"):
        vals = np.asarray(curve(np.asarray(grid, dtype=float)))
    c1 = "pass" if np.all(np.isfinite(vals) & (vals >= 0)) else "fail"
    lower, _ = _walk(curve, a, -1, DEFAULT_TOL)
    upper, _ = _walk(curve, a, +1, DEFAULT_TOL)
    want_lower = "finite" if alpha > 0 else "infinite"
    c2 = "inconclusive" if lower == "inconclusive" else ("pass" if lower == want_lower else "fail")
    c3 = "inconclusive" if upper == "inconclusive" else ("pass" if upper == "infinite" else "fail")
    return ConditionReport(alpha, c1, c2, c3, lower, upper, a)


def _cdf_from_integral(alpha, k, integral):
    """Map I (from the anchor, or from 0 when alpha > 0) to a cdf value."""
    if alpha > 0:
        if integral <= 0:
            return 0.0
        return math.exp(math.log(-math.expm1(-integral)) / alpha)
    s = math.log(k) - integral
    if alpha == 0:
        return math.exp(-math.exp(s)) if s < 700 else 0.0
    shift = math.log(-k * alpha) - integral
    return math.exp(np.logaddexp(0.0, shift) / alpha)


class ReconstructedCdf:
    """Cdf rebuilt from a GRAI curve, with a cache of cumulative integrals.

    Not thread-safe: the cache is mutated by queries.
    """

    def __init__(self, curve: GraiCurve, alpha: float, anchor: Anchor = None,
                 tol: float = DEFAULT_TOL, width: float = 1.0):
        if not math.isfinite(alpha):
            raise ValidationError("alpha must be finite")
        if alpha <= 0 and anchor is None:
            raise ValidationError("an anchor (a, k) is required for alpha <= 0")
        self.curve = curve
        self.alpha = float(alpha)
        self.anchor = anchor if alpha <= 0 else None
        self.tol = tol
        self.width = width
        self._keys, self._vals = [], []
        if self.anchor is not None:
            self._keys, self._vals = [self.anchor.a], [0.0]

    def integral(self, x: float) -> float:
        """I(a, x) for alpha <= 0, I(0, x) for alpha > 0."""
        keys = self._keys
        i = bisect.bisect_left(keys, x)
        if i < len(keys) and keys[i] == x:
            return self._vals[i]
        if not keys or (self.alpha > 0 and i == 0):
            val = integral_from_zero(self.curve, x, self.tol, self.width)
        else:
            j = i - 1 if i == len(keys) or (i > 0 and x - keys[i - 1] < keys[i] - x) else i
            val = self._vals[j] + integrate_curve(self.curve, keys[j], x, self.tol)
        keys.insert(i, x)
        self._vals.insert(i, val)
        return val

    def __call__(self, x):
        arr, scalar = as_array(x)
        if np.any(~np.isfinite(arr) | (arr <= 0)):
            raise ValidationError("reconstruction needs finite x > 0")
        vals = np.asarray(self.curve(arr))
        if np.any(~np.isfinite(vals) | (vals < 0)):
            raise ConditionError("curve is negative or infinite at a query point (condition 1)")
        flat = arr.ravel()
        out = np.empty_like(flat)
        k = self.anchor.k if self.anchor else None
        for idx in np.argsort(flat):
            out[idx] = _cdf_from_integral(self.alpha, k, self.integral(float(flat[idx])))
        return finish(np.clip(out.reshape(arr.shape), 0.0, 1.0), scalar)

    cdf = __call__


def reconstruct_neg(curve: GraiCurve, alpha: float, anchor: Anchor, x, tol: float = DEFAULT_TOL):
    if not alpha < 0:
        raise ValidationError("reconstruct_neg needs alpha < 0")
    return ReconstructedCdf(curve, alpha, anchor, tol)(x)


def reconstruct_zero(curve: GraiCurve, anchor: Anchor, x, tol: float = DEFAULT_TOL):
    return ReconstructedCdf(curve, 0.0, anchor, tol)(x)


def reconstruct_pos(curve: GraiCurve, alpha: float, x, tol: float = DEFAULT_TOL):
    if not alpha > 0:
        raise ValidationError("reconstruct_pos needs alpha > 0")
    return ReconstructedCdf(curve, alpha, None, tol)(x)


def reconstruct(curve: GraiCurve, alpha: float, x, anchor: Anchor = None, tol: float = DEFAULT_TOL):
    """Dispatch on the sign of ``alpha``."""
    return ReconstructedCdf(curve, alpha, anchor, tol)(x)


def matching_anchor(d: LifetimeDistribution, alpha: float, a: float) -> Anchor:
    """Anchor whose family member is ``d`` itself: k alpha = 1 - F(a)^alpha."""
    logF = float(d.logcdf(a))
    if alpha == 0:
        return Anchor(a, -logF)
    return Anchor(a, -math.expm1(alpha * logF) / alpha)


def roundtrip_error(d: LifetimeDistribution, alpha: float, grid, tol: float = DEFAULT_TOL) -> float:
    """Max |F_reconstructed - F| over ``grid`` starting from the exact GRAI of ``d``."""
    grid = np.asarray(grid, dtype=float)
    lo, hi = float(d.quantile(1e-3)), float(d.quantile(1 - 1e-3))
    if grid.min() < lo * (1 - 1e-9) or grid.max() > hi * (1 + 1e-9):
        raise ValidationError("grid must lie inside the [q_0.001, q_0.999] band")
    anchor = matching_anchor(d, alpha, float(d.quantile(0.5))) if alpha <= 0 else None
    rec = ReconstructedCdf(SymbolicCurve(d, alpha), alpha, anchor, tol)
    return float(np.max(np.abs(rec(grid) - d.cdf(grid))))
