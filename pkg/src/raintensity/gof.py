"""Chi-square (equal-width classes with pooling) and Kolmogorov-Smirnov tests."""

import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats
from scipy.special import kolmogorov

from .distributions import LifetimeDistribution
from .errors import ValidationError
from .sample import Sample


@dataclass(frozen=True)
class ClassRow:
    lo: float
    hi: float
    observed: float
    expected: float


@dataclass
class GofReport:
    test: str
    statistic: float
    p_value: float
    n: int
    dof: int = None
    classes: list = field(default_factory=list)
    settings: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        if self.test != "chi2":
            d.pop("classes")
            d.pop("dof")
        return d

    def class_table_tsv(self) -> str:
        lines = ["# chi-square classes", "lo\thi\tobserved\texpected"]
        lines += [f"{r.lo:.17g}\t{r.hi:.17g}\t{r.observed:.17g}\t{r.expected:.17g}" for r in self.classes]
        return "\n".join(lines) + "\n"


def expected_frequencies(d: LifetimeDistribution, n: int, k: int, width: float) -> np.ndarray:
    """``n [F(x_{j+1}) - F(x_j)]`` for the classes ``[j w, (j+1) w)``, j = 0..k-1."""
    edges = np.arange(k + 1) * float(width)
    return n * np.diff(np.asarray(d.cdf(edges)))


def pool_classes(observed, expected, edges, min_expected: float = 5.0):
    """Pool classes until every expected count reaches ``min_expected``.

    Trailing classes are folded right-to-left into their left neighbour,
    then leading classes left-to-right; a remaining small interior class
    joins its smaller neighbour.  Totals are preserved exactly.
    """
    obs, exp_ = list(map(float, observed)), list(map(float, expected))
    lo, hi = list(edges[:-1]), list(edges[1:])

    def merge(i, j):  # fold class j into class i (adjacent)
        obs[i] += obs[j]
        exp_[i] += exp_[j]
        lo[i], hi[i] = min(lo[i], lo[j]), max(hi[i], hi[j])
        for seq in (obs, exp_, lo, hi):
            del seq[j]

    while len(exp_) > 1 and exp_[-1] < min_expected:
        merge(len(exp_) - 2, len(exp_) - 1)
    while len(exp_) > 1 and exp_[0] < min_expected:
        merge(1, 0)
    while len(exp_) > 1:
        small = [i for i, e in enumerate(exp_) if e < min_expected]
        if not small:
            break
        i = small[0]
        j = i - 1 if exp_[i - 1] <= exp_[i + 1] else i + 1
        merge(min(i, j), max(i, j)) if j > i else merge(j, i)
    return np.array(obs), np.array(exp_), [ClassRow(a, b, o, e) for a, b, o, e in zip(lo, hi, obs, exp_)]


def chi_square(data, d: LifetimeDistribution, k: int = 20, width: float = 0.21, n_params: int = 0,
               n: int = None, min_expected: float = 5.0, tail_expected: bool = False) -> GofReport:
    """Pearson chi-square test on equal-width classes ``[j w, (j+1) w)`` from 0.

    ``data`` is a :class:`Sample` or the ``k`` observed class counts; for
    counts, ``n`` is the full sample size (default: their sum) and the
    ``n - sum(counts)`` observations beyond ``k * w`` are credited to the
    last class, as are sample values beyond it.  Expected counts are
    ``n [F(x_{j+1}) - F(x_j)]``; with ``tail_expected`` the mass beyond
    ``k * w`` is added to the last class as well.
    """
    if k < 2:
        raise ValidationError("need at least 2 classes")
    if not width > 0:
        raise ValidationError("class width must be positive")
    edges = np.arange(k + 1) * float(width)
    if isinstance(data, Sample):
        n = data.n
        idx = np.minimum(np.floor(data.values / width).astype(int), k - 1)
        observed = np.bincount(idx, minlength=k).astype(float)
    else:
        observed = np.asarray(data, dtype=float).copy()
        if observed.shape != (k,):
            raise ValidationError(f"expected {k} class counts, got shape {observed.shape}")
        if np.any(observed < 0):
            raise ValidationError("class counts must be nonnegative")
        total = observed.sum()
        n = int(round(total)) if n is None else int(n)
        if n < total:
            raise ValidationError(f"n={n} is smaller than the sum of class counts ({total:g})")
        observed[-1] += n - total
    if n == 0:
        raise ValidationError("empty sample")
    expected = expected_frequencies(d, n, k, width)
    if tail_expected:
        expected[-1] += n * float(d.sf(edges[-1]))
    obs, exp_, rows = pool_classes(observed, expected, edges, min_expected)
    dof = len(rows) - 1 - int(n_params)
    if dof <= 0:
        raise ValidationError(f"non-positive degrees of freedom ({dof}) after pooling")
    stat = float(np.sum((obs - exp_) ** 2 / exp_))
    p = float(stats.chi2.sf(stat, dof))
    settings = {"k": k, "width": width, "n_params": n_params, "min_expected": min_expected,
                "tail_expected": tail_expected}
    return GofReport("chi2", stat, p, n, dof, rows, settings)


def ks_statistic(s: Sample, d: LifetimeDistribution) -> float:
    n = s.n
    F = np.asarray(d.cdf(s.values))
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def ks_test(s: Sample, d: LifetimeDistribution) -> GofReport:
    """One-sample Kolmogorov-Smirnov test.

    The p-value is the Kolmogorov tail ``Q(t) = 2 sum (-1)^(j-1) exp(-2 j^2 t^2)``
    at Stephens' corrected ``t = K (sqrt(n) + 0.12 + 0.11/sqrt(n))``.
    """
    K = ks_statistic(s, d)
    rn = math.sqrt(s.n)
    t = K * (rn + 0.12 + 0.11 / rn)
    p = float(np.clip(kolmogorov(t), 0.0, 1.0))
    return GofReport("ks", K, p, s.n, settings={"p_value_method": "stephens-asymptotic"})
