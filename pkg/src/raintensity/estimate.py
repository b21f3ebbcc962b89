"""Gaussian kernel estimates of f and F and the plug-in GRAI estimator."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from ._util import as_array, finish
from .errors import DomainError, ValidationError
from .grai import TabulatedCurve, grai_plugin
from .sample import Sample

__all__ = [
    "Sample", "KdeModel", "GridSpec", "default_bandwidth",
    "kde_pdf", "kde_cdf", "empirical_grai", "grai_grid",
]

_SQRT_2PI = math.sqrt(2.0 * math.pi)
_CHUNK = 2_000_000


def default_bandwidth(s: Sample) -> float:
    """Normal-reference rule ``min(sd, IQR/1.349) * (4 / (3 N))**0.2``.

    Falls back to the standard deviation when the IQR is zero.
    """
    if s.n < 2:
        raise ValidationError("bandwidth rule needs at least two observations")
    sd = float(np.std(s.values, ddof=1))
    q75, q25 = np.percentile(s.values, [75, 25])
    spread = min(sd, (q75 - q25) / 1.349) or sd
    if not spread > 0:
        raise ValidationError("sample has zero dispersion; bandwidth undefined")
    return float(spread * (4.0 / (3.0 * s.n)) ** 0.2)


@dataclass(frozen=True)
class KdeModel:
    sample: Sample
    bandwidth: float

    def __post_init__(self):
        h = self.bandwidth
        if not (isinstance(h, (int, float, np.floating)) and math.isfinite(h) and h > 0):
            raise ValidationError(f"bandwidth must be a positive real, got {h!r}")

    @classmethod
    def fit(cls, sample: Sample, bandwidth: float = None) -> "KdeModel":
        return cls(sample, default_bandwidth(sample) if bandwidth is None else float(bandwidth))

    def _reduce(self, x, kernel):
        arr, scalar = as_array(x)
        flat = arr.ravel()
        data = self.sample.values
        out = np.empty_like(flat)
        step = max(1, _CHUNK // data.size)
        for i in range(0, flat.size, step):
            z = (flat[i:i + step, None] - data[None, :]) / self.bandwidth
            out[i:i + step] = kernel(z).mean(axis=1)
        return finish(out.reshape(arr.shape), scalar)

    def pdf(self, x):
        return self._reduce(x, lambda z: np.exp(-0.5 * z * z)) / (_SQRT_2PI * self.bandwidth)

    def cdf(self, x):
        return self._reduce(x, ndtr)

    def sf(self, x):
        return self._reduce(x, lambda z: ndtr(-z))


def kde_pdf(m: KdeModel, x):
    return m.pdf(x)


def kde_cdf(m: KdeModel, x):
    return m.cdf(x)


def empirical_grai(m: KdeModel, alpha: float, x, eps: float = 1e-6):
    """Plug-in alpha-GRAI with the kernel estimates of f and F.

    Points where the estimated cdf falls outside ``[eps, 1 - eps]`` raise
    :class:`DomainError`.
    """
    arr, scalar = as_array(x)
    F = np.asarray(m.cdf(arr))
    if np.any((F < eps) | (np.asarray(m.sf(arr)) < eps)):
        raise DomainError(f"estimated cdf outside [{eps:g}, 1 - {eps:g}]")
    return finish(grai_plugin(alpha, arr, m.pdf(arr), F), scalar)


@dataclass(frozen=True)
class GridSpec:
    """Where to evaluate an empirical GRAI curve.

    ``mode="uniform"`` places ``points`` equally spaced abscissae between the
    empirical ``p_lo`` and ``p_hi`` quantiles; ``mode="sample"`` uses the
    distinct observations inside that band instead.
    """

    p_lo: float = 0.05
    p_hi: float = 0.95
    points: int = 100
    mode: str = "uniform"
    eps: float = 1e-6

    def __post_init__(self):
        if not 0 <= self.p_lo < self.p_hi <= 1:
            raise ValidationError(f"empty quantile band [{self.p_lo}, {self.p_hi}]")
        if self.mode not in ("uniform", "sample"):
            raise ValidationError(f"unknown grid mode {self.mode!r}")
        if self.mode == "uniform" and self.points < 2:
            raise ValidationError("a uniform grid needs at least 2 points")

    def abscissae(self, s: Sample) -> np.ndarray:
        lo, hi = np.quantile(s.values, [self.p_lo, self.p_hi])
        if self.mode == "sample":
            v = np.unique(s.values)
            return v[(v >= lo) & (v <= hi)]
        return np.linspace(lo, hi, self.points)


def grai_grid(m: KdeModel, alpha: float, spec: GridSpec = GridSpec()) -> TabulatedCurve:
    """Tabulate the empirical alpha-GRAI on the grid described by ``spec``.

    Abscissae that are not positive or whose estimated cdf leaves the
    ``eps`` band are dropped.
    """
    x = spec.abscissae(m.sample)
    x = x[x > 0]
    F, S = np.asarray(m.cdf(x)), np.asarray(m.sf(x))
    x = x[(F >= spec.eps) & (S >= spec.eps)]
    if x.size < 2:
        raise ValidationError("fewer than two admissible grid points in the quantile band")
    meta = {"bandwidth": m.bandwidth, "band": [spec.p_lo, spec.p_hi], "mode": spec.mode}
    return TabulatedCurve(x, empirical_grai(m, alpha, x, spec.eps), alpha=alpha, meta=meta)
