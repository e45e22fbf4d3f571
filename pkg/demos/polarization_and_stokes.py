"""
Polarization states, Stokes parameters and Pauli tomography
===========================================================

"""

import math
import numpy as np
from qmclab import qstate, estimate, measure

# a photon linearly polarized at 30 degrees
psi = qstate.make_linear_polarization(math.radians(30))
print("amplitudes:", psi.alpha, psi.beta)
print("stokes:", qstate.stokes_parameters(psi).as_array())

# the angle comes back from the Stokes vector
print("angle (deg):", math.degrees(qstate.polarization_angle(psi)))

# estimate the Bloch vector from 3 x 10^4 measured copies
budget = measure.CopyBudget()
res = estimate.pauli_tomography(psi.density(), 10_000, rng_seed=1, budget=budget)
print("estimates:", np.round(res.expectation_estimates, 4), "copies:", budget.consumed)
print("fidelity of the reconstruction:", qstate.fidelity(psi.density(), res.rho_hat))
