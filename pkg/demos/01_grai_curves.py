"""Tour of alpha-GRAI curves for the built-in lifetime families.

Run with ``python demos/01_grai_curves.py``.
"""

# %% Setup
import numpy as np

import raintensity as ri

np.set_printoptions(precision=4, suppress=True)

families = [
    ri.Exponential(1.0),
    ri.InvWeibull2(2.0, 1.0),
    ri.InvLogLogistic(4.0, 0.5),
    ri.ExponentiatedExponential(2.0, 1.5),
]

# %% One curve per family at alpha = 0
# alpha = 0 is the plain reversed aging intensity: x f(x) / (F(x) (-log F(x))).
for d in families:
    x = ri.quantile_grid(d, 5)
    print(f"{d!r:45s} x={x}  L0={ri.grai_alpha(d, 0.0, x)}")

# %% The curve decreases as alpha grows
d = ri.InvLogLogistic(4.0, 0.5)
x = ri.quantile_grid(d, 4)
for alpha in (-2, -1, 0, 1, 2):
    print(f"alpha={alpha:+d}  {ri.grai_alpha(d, alpha, x)}")

# %% Families with a closed form at a matching alpha
# Each line compares the closed form with the generic evaluation route.
cases = [
    (ri.InvLogLogistic(4.0, 0.5), -1.0, "constant gamma"),
    (ri.InvModifiedWeibull(0.5, 2.0, 0.8), 0.0, "gamma + delta x"),
    (ri.ExponentiatedExponential(2.0, 1.5), 2.0, "b x"),
    (ri.InvWeibull2(2.0, 1.0), 0.0, "constant beta"),
]
for d, alpha, shape in cases:
    x = ri.quantile_grid(d, 50)
    closed = ri.grai_alpha(d, alpha, x, method="closed")
    generic = ri.grai_alpha(d, alpha, x, method="generic")
    err = np.max(np.abs(closed - generic) / closed)
    print(f"{d!r:50s} alpha={alpha:+.0f}  {shape:16s} max rel. diff {err:.1e}")

# %% Special values of alpha
# alpha = 1 gives x times the hazard rate; alpha = -1 gives x times the log-odds rate.
d = ri.Exponential(2.0)
x = np.array([0.1, 0.5, 1.0])
print("alpha=1 :", ri.grai_alpha(d, 1.0, x), " x*hazard:", x * 2.0)
F, f = d.cdf(x), d.pdf(x)
print("alpha=-1:", ri.grai_alpha(d, -1.0, x), " x*LOR   :", x * f / (F * (1 - F)))

# %% Forward intensity and the reciprocal law
# The forward alpha-AI of X at 1/x equals the alpha-GRAI of 1/X at x.
X = ri.InvLogLogistic(4.0, 0.5)
recip = ri.InvLogLogistic(4.0, 2.0)
x = ri.quantile_grid(recip, 5)
print("forward of X at 1/x:", ri.ai_alpha(X, 0.5, 1 / x))
print("GRAI of 1/X at x   :", ri.grai_alpha(recip, 0.5, x))
