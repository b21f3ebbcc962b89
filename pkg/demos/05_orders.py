"""Comparing lifetimes through their GRAI curves.

X precedes Y in the alpha-RAI order when L_{alpha,X} <= L_{alpha,Y}
everywhere.  These checks work on finite grids, so every verdict is
numerical evidence rather than proof.

Run with ``python demos/05_orders.py``.
"""

# %% Setup
import raintensity as ri

# %% Constant curves order trivially
X, Y = ri.InvLogLogistic(3.0, 1.0), ri.InvLogLogistic(5.0, 1.0)
for alpha in (-2.0, -1.0, 0.0, 0.5, 1.0):
    res = ri.rai_order_check(X, Y, alpha)
    print(f"alpha={alpha:+.1f}  {res.direction:8s} crossings={[round(c, 3) for c in res.crossings]}")

# %% At alpha = 1 the order reverses the hazard-rate order
res = ri.rai_order_check(ri.Exponential(2.0), ri.Exponential(1.0), 1.0)
print("Exp(2) vs Exp(1) at alpha=1:", res.direction)

# %% Carrying an order to other alphas
# With X stochastically smaller, an order at beta spreads to smaller alphas
# (X <= Y) or to larger alphas (X >= Y).
for dx, dy, beta in [(ri.Exponential(2.0), ri.Exponential(1.0), 1.0),
                     (ri.InvWeibull2(2.0, 1.0), ri.InvWeibull2(2.0, 3.0), -1.0),
                     (X, Y, -1.0)]:
    rep = ri.implication_report(dx, dy, beta)
    print(f"{dx!r} vs {dy!r} beta={beta}: {rep.status} {rep.reason}")

# %% Reciprocal duality
# Forward intensity of X at 1/x against the GRAI of 1/X at x.
d = ri.Exponential(1.5)
print("Exp(1.5) vs InvWeibull2(1, 1.5):", ri.reciprocal_duality_check(d, ri.InvWeibull2(1.0, 1.5), 0.5))
print("generic reciprocal wrapper     :", ri.reciprocal_duality_check(d, ri.Reciprocal(d), 0.5))
print("wrong partner                  :", ri.reciprocal_duality_check(d, ri.InvWeibull2(2.0, 1.5), 0.5))
