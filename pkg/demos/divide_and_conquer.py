"""
Locating a polarization angle by bisection
==========================================

"""

import math
from qmclab import estimate
from qmclab.measure import CopyBudget
from qmclab.qstate import make_linear_polarization

# each half-interval question costs one copy and halves the bin
true_k = 1.234
for m in (1, 4, 10, 20):
    oracle = estimate.HalfIntervalOracle(true_k)
    grid = estimate.bisection_search(oracle, m)
    print(f"m={m:2d}  bin [{grid.lo:.6f}, {grid.hi:.6f})  copies={oracle.budget.consumed}")

# copies times bin width shrinks as m pi / 2^m
for m in range(1, 9):
    pt = estimate.uncertainty_product(m)
    print(m, round(pt.delta_k, 6), round(pt.product, 6))

# a realizable estimator: two-basis maximum likelihood, error ~ 1 / (2 sqrt n)
for n in (100, 10_000):
    k_hat, _ = estimate.mle_polarization(make_linear_polarization(true_k), n,
                                         rng_seed=n, budget=CopyBudget())
    print(n, float(k_hat), 1 / (2 * math.sqrt(n)))
