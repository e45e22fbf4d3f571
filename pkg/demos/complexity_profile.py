"""
Copies needed for a target accuracy
===================================

"""

from qmclab.estimate import complexity_profile

targets = [0.1, 0.03, 0.01]
for name in ("exact_oracle", "bisection", "mle", "tomography"):
    pts = complexity_profile(name, targets, trials=30, rng_seed=1)
    print(f"{name:13s}", [pt.copies for pt in pts])
