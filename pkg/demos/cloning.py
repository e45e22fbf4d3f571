"""
Universal cloning and what it does to tomography
================================================

"""

import numpy as np
from qmclab import clone, qstate
from qmclab.measure import CopyBudget
from qmclab.estimate import angle_from_bloch

# random pure input
rng = np.random.default_rng(0)
v = rng.normal(size=2) + 1j * rng.normal(size=2)
psi = qstate.PureQubit.from_vector(v, normalize=True)

out = clone.bh_clone(psi.density())
print("overlap fidelity:", out.input_overlap_fidelity)      # 5/6
print("trace fidelity:  ", out.trace_fidelity)              # sqrt(5/6)
print("Bloch before/after:", qstate.pauli_expectations(psi.density()),
      qstate.pauli_expectations(out.clone_a))

# one original copy, many clones: the estimate is of the shrunk state
k = 0.7
budget = CopyBudget()
res = clone.clone_then_tomograph(qstate.make_linear_polarization(k), 300_000, 100_000,
                                 rng_seed=3, budget=budget)
print("originals used:", budget.consumed, "clones measured:", res.clone_copies)
print("recovered angle:", float(angle_from_bloch(res.expectation_estimates)), "true:", k)
