"""Grid checks of the alpha-GRAI stochastic order.

X is below Y in the alpha-RAI order when L_{alpha,X}(x) <= L_{alpha,Y}(x) for
every x > 0.  Everything here compares the two curves on a finite grid, so a
verdict is numerical evidence for the order, never a proof of it.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .distributions import LifetimeDistribution, quantile_grid
from .errors import ValidationError
from .grai import CDF_FLOOR, SF_FLOOR, ai_alpha, grai_alpha

TIE_TOL = 1e-12
DEFAULT_POINTS = 512
EVIDENCE = "numerical evidence"


@dataclass(frozen=True)
class OrderCheckResult:
    """Outcome of comparing two alpha-GRAI curves on a grid.

    ``gaps`` holds ``L_X - L_Y`` on ``grid``; ``crossings`` are the midpoints
    (in log x) of grid intervals where the gap changes sign beyond the tie
    tolerance.
    """

    direction: str
    alpha: float
    grid: np.ndarray = field(repr=False)
    gaps: np.ndarray = field(repr=False)
    crossings: tuple = ()
    tol: float = TIE_TOL
    evidence: str = EVIDENCE

    @property
    def max_gap(self) -> float:
        """Largest ``L_X - L_Y`` on the grid (signed)."""
        return float(np.max(self.gaps))

    @property
    def min_gap(self) -> float:
        return float(np.min(self.gaps))

    def holds(self, relation: str) -> bool:
        """Whether ``"X<=Y"`` or ``"X>=Y"`` holds on the grid (ties allowed)."""
        if relation == "X<=Y":
            return self.max_gap <= self.tol
        if relation == "X>=Y":
            return self.min_gap >= -self.tol
        raise ValidationError(f"unknown relation {relation!r}")

    def to_dict(self) -> dict:
        return {
            "direction": self.direction,
            "alpha": self.alpha,
            "crossings": [float(c) for c in self.crossings],
            "max_gap": self.max_gap,
            "min_gap": self.min_gap,
            "tie_tolerance": self.tol,
            "grid": {"points": int(self.grid.size), "min": float(self.grid[0]), "max": float(self.grid[-1])},
            "evidence": self.evidence,
        }


def _admissible(dists, grid):
    """Keep grid points where every distribution has F in the evaluable band."""
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1:
        raise ValidationError("grid must be one-dimensional")
    keep = np.isfinite(grid) & (grid > 0)
    for d in dists:
        lo, hi = d.support
        inside = keep & (grid > lo) & (grid < hi)
        with np.errstate(invalid="ignore"):
            logF = np.full(grid.shape, -np.inf)
            logF[inside] = d.logcdf(grid[inside])
        keep = inside & (logF >= math.log(CDF_FLOOR)) & (-np.expm1(logF) >= SF_FLOOR)
    out = np.sort(grid[keep])
    if out.size == 0:
        raise ValidationError("no grid point lies inside the admissible band of both distributions")
    return out


def _default_grid(dists, n):
    return quantile_grid(list(dists), n, 0.001, 0.999)


def classify(grid, gaps, alpha: float, tol: float = TIE_TOL) -> OrderCheckResult:
    """Turn pointwise gaps ``L_X - L_Y`` into an :class:`OrderCheckResult`."""
    grid = np.asarray(grid, dtype=float)
    gaps = np.asarray(gaps, dtype=float)
    if np.any(np.isnan(gaps)):
        raise ValidationError("GRAI comparison produced NaN on the grid")
    sign = np.where(gaps > tol, 1, np.where(gaps < -tol, -1, 0))
    nz = np.flatnonzero(sign)
    crossings = []
    for i, j in zip(nz[:-1], nz[1:]):
        if sign[i] != sign[j]:
            crossings.append(math.sqrt(grid[i] * grid[j]))
    if crossings:
        direction = "crossing"
    elif nz.size == 0:
        direction = "equal"
    elif sign[nz[0]] < 0:
        direction = "X<=Y"
    else:
        direction = "X>=Y"
    return OrderCheckResult(direction, float(alpha), grid, gaps, tuple(crossings), tol)


def rai_order_check(dX: LifetimeDistribution, dY: LifetimeDistribution, alpha: float,
                    grid=None, n: int = DEFAULT_POINTS, tol: float = TIE_TOL) -> OrderCheckResult:
    """Compare ``L_{alpha,X}`` with ``L_{alpha,Y}`` pointwise.

    The default grid has ``n`` log-spaced points over the band shared by the
    [0.001, 0.999] quantile ranges of both distributions.  Points outside
    either distribution's evaluable band are dropped.

    Examples
    --------
    >>> from raintensity.distributions import Exponential
    >>> rai_order_check(Exponential(2.0), Exponential(1.0), 1.0).direction
    'X>=Y'
    """
    grid = _default_grid((dX, dY), n) if grid is None else grid
    grid = _admissible((dX, dY), grid)
    gaps = np.asarray(grai_alpha(dX, alpha, grid)) - np.asarray(grai_alpha(dY, alpha, grid))
    return classify(grid, gaps, alpha, tol)


def reciprocal_duality_check(d: LifetimeDistribution, d_recip: LifetimeDistribution,
                             alpha: float, grid=None, n: int = 200) -> float:
    """Largest ``|L_{alpha}(d; 1/x) - Lrev_{alpha}(d_recip; x)|`` over ``grid``.

    ``d_recip`` should be the law of ``1/X`` for ``X ~ d``; a wrong pairing
    shows up as a large violation.  The grid is in the scale of ``d_recip``.
    """
    if grid is None:
        grid = quantile_grid(d_recip, n, 0.001, 0.999)
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or np.any(~np.isfinite(grid)) or np.any(grid <= 0):
        raise ValidationError("duality grid must be non-empty, finite and positive")
    lhs = np.asarray(ai_alpha(d, alpha, 1.0 / grid))
    rhs = np.asarray(grai_alpha(d_recip, alpha, grid))
    return float(np.max(np.abs(lhs - rhs)))


@dataclass
class ImplicationReport:
    """Premise and spot checks for the alpha-monotonicity of RAI orders.

    Under ``X <=st Y``, ``X <=_beta Y`` carries over to every alpha < beta
    and ``X >=_beta Y`` to every alpha > beta.  ``status`` is one of
    ``"premise fails"``, ``"verified"`` or ``"counterexample"``.
    """

    beta: float
    status: str
    st_order: bool
    beta_check: OrderCheckResult
    cases: tuple = ()
    checks: list = field(default_factory=list)
    counterexamples: list = field(default_factory=list)
    reason: str = ""
    evidence: str = EVIDENCE

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "status": self.status,
            "st_order": self.st_order,
            "beta_order": self.beta_check.to_dict(),
            "cases": list(self.cases),
            "checks": [{"relation": rel, **c.to_dict()} for rel, c in self.checks],
            "counterexamples": self.counterexamples,
            "reason": self.reason,
            "evidence": self.evidence,
        }


def implication_report(dX: LifetimeDistribution, dY: LifetimeDistribution, beta: float,
                       grid=None, n: int = DEFAULT_POINTS, tol: float = TIE_TOL) -> ImplicationReport:
    """Check the premise ``X <=st Y`` plus a beta-RAI order, then spot-check
    the implied orders at ``beta - 2, beta - 1, beta - 0.5`` (X <=_beta Y) or
    ``beta + 0.5, beta + 1, beta + 2`` (X >=_beta Y).

    Equal curves at beta satisfy both premises and both sets are checked.
    Any grid point violating an implied order is listed in
    ``counterexamples``.
    """
    grid = _default_grid((dX, dY), n) if grid is None else grid
    grid = _admissible((dX, dY), grid)
    st_gap = np.asarray(dX.cdf(grid)) - np.asarray(dY.cdf(grid))
    st = bool(np.all(st_gap >= -tol))
    beta_check = rai_order_check(dX, dY, beta, grid, tol=tol)

    if not st:
        i = int(np.argmin(st_gap))
        return ImplicationReport(beta, "premise fails", False, beta_check,
                                 reason=f"X <=st Y fails: F_X - F_Y = {st_gap[i]:.3g} at x = {grid[i]:.6g}")
    cases = []
    if beta_check.holds("X<=Y"):
        cases.append((1, "X<=Y", (beta - 2.0, beta - 1.0, beta - 0.5)))
    if beta_check.holds("X>=Y"):
        cases.append((2, "X>=Y", (beta + 0.5, beta + 1.0, beta + 2.0)))
    if not cases:
        return ImplicationReport(beta, "premise fails", True, beta_check,
                                 reason=f"no beta-RAI order at beta={beta}: curves cross")

    checks, bad = [], []
    for _, rel, alphas in cases:
        for a in alphas:
            res = rai_order_check(dX, dY, a, grid, tol=tol)
            checks.append((rel, res))
            viol = res.gaps > tol if rel == "X<=Y" else res.gaps < -tol
            for x, g in zip(res.grid[viol], res.gaps[viol]):
                bad.append({"alpha": a, "relation": rel, "x": float(x), "gap": float(g)})
    status = "counterexample" if bad else "verified"
    return ImplicationReport(beta, status, True, beta_check, tuple(c[0] for c in cases), checks, bad)

