"""
Wigner function from simulated homodyne data
============================================

"""

import math
import numpy as np
from qmclab import wigner

# 180 phases, 10^4 quadrature samples each
alpha = 1.0 + 0.5j
sino = wigner.sample_quadratures(alpha, 10_000, 180, rng_seed=5)
q, p = wigner.default_axes(alpha, step=0.2)
rec = wigner.inverse_radon(sino, k_c=5.0, q_axis=q, p_axis=p)
truth = wigner.analytic_wigner_coherent(alpha, q, p)

print("peak at", rec.peak(), "expected", (math.sqrt(2) * alpha.real, math.sqrt(2) * alpha.imag))
print("integral", rec.integral())
print("max error x pi", np.max(np.abs(rec.values - truth.values)) * math.pi)
