"""
Verifying a claimed angle and the membership query oracle
=========================================================

"""

import math
from qmclab import oracle, qstate
from qmclab.measure import CopyBudget

state = qstate.make_linear_polarization(0.3)

# a claim off by pi/4 passes each copy with probability 1/2
for m in (1, 4, 8):
    acc = oracle.verify_claim_batch(state, 0.3 + math.pi / 4, m, 100_000, m, CopyBudget())
    print(m, acc / 100_000, 2.0 ** -m)

# U|x,y> = |x, y xor f(x)>; applying it twice undoes it
members = {"011", "110"}
s = oracle.QueryState("011", 0)
once = oracle.query_oracle_apply(members, s)
print(once, oracle.query_oracle_apply(members, once))
