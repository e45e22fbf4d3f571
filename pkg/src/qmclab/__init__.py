"""Simulation laboratory for quantum measurement complexity.

How many copies of a state does a measurement strategy need before its
answer is good enough?  The package answers this for single-photon
polarization (oracles, a copy-counting verifier, tomography, bisection and
maximum-likelihood estimation, universal cloning) and provides the
number-phase and homodyne-tomography numerics that go with it.
"""
__version__ = "0.1.0"

from . import clone, estimate, fock, measure, oracle, qstate, wigner  # noqa: E402,F401
from .measure import BudgetExceeded, CopyBudget  # noqa: E402,F401
from .qstate import DensityMatrix, PolarizationAngle, PureQubit  # noqa: E402,F401
