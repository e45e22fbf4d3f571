"""
Number and phase of a truncated coherent state
==============================================

"""

import math
from qmclab import fock

D = 256
ops = fock.oscillator_operators(D)

# coherent states saturate the position-momentum bound
psi = fock.coherent_state(2 + 1j, D)
r = fock.uncertainty_check(ops.x, ops.p, psi)
print("dx dp =", r.product, "bound", r.bound)

# number spread times discrete phase spread
for alpha in (1, 2, 4, 6):
    psi = fock.coherent_state(alpha, D)
    _, dn = fock.number_statistics(psi)
    _, dtheta = fock.phase_statistics(psi)
    print(f"|alpha|={alpha}  dN={dn:.4f}  dtheta={dtheta:.5f}  product={dn * dtheta:.5f}")

# vacuum: no preferred phase, the spread is that of a uniform distribution
_, dtheta = fock.phase_statistics(fock.coherent_state(0, 64))
print(dtheta, math.pi / math.sqrt(3))
