"""Symmetric universal 1 -> 2 qubit cloning and the oracle-as-cloner pipeline.

Only the reduced single-clone channel is modelled: each clone is the input
with its Bloch vector shrunk by 2/3, i.e. ``rho -> (2/3) rho + I/6``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import SeedLike
from .estimate import TomographyResult, pauli_tomography, project_to_ball
from .measure import CopyBudget
from .qstate import (
    IDENTITY, DensityMatrix, PureQubit, _as_density, density_from_pauli_expectations,
    fidelity, overlap_fidelity,
)

__all__ = ["SHRINK", "CloneOutput", "bh_clone", "clone_then_tomograph"]

SHRINK = 2.0 / 3.0


@dataclass(frozen=True)
class CloneOutput:
    """Both clones plus their fidelity to the input in two conventions.

    ``input_overlap_fidelity`` is ``tr(rho_in rho_out)`` (5/6 for pure
    inputs); ``trace_fidelity`` is the Uhlmann ``tr sqrt(...)`` form, whose
    pure-input value is ``sqrt(5/6)``.
    """

    clone_a: DensityMatrix
    clone_b: DensityMatrix
    input_overlap_fidelity: float
    trace_fidelity: float


def _shrink(rho: DensityMatrix) -> DensityMatrix:
    return DensityMatrix(SHRINK * rho.entries + (1.0 - SHRINK) * IDENTITY / 2)


def bh_clone(rho_in) -> CloneOutput:
    rho = _as_density(rho_in)
    out = _shrink(rho)
    return CloneOutput(out, out, overlap_fidelity(rho, out), fidelity(rho, out))


def clone_then_tomograph(true_state: PureQubit, n_clones: int, m_per_axis: int,
                         rng_seed: SeedLike, budget: CopyBudget) -> TomographyResult:
    """Clone one original copy ``n_clones`` times, then run Pauli tomography on the clones.

    Only the original copy is charged to ``budget``.  The returned
    expectation estimates are de-shrunk (divided by 2/3) so that they
    estimate the input state directly; ``predicted_std`` is scaled to match.
    """
    if m_per_axis < 1:
        raise ValueError("m_per_axis must be at least 1")
    if n_clones < 3 * m_per_axis:
        raise ValueError(
            f"{n_clones} clones cannot supply {m_per_axis} shots on each of three axes"
        )
    budget.charge(1, "cloner")
    clone = bh_clone(true_state.density()).clone_a
    clone_budget = CopyBudget(limit=n_clones)
    raw = pauli_tomography(clone, m_per_axis, rng_seed, clone_budget)
    est = tuple(float(t) / SHRINK for t in raw.expectation_estimates)
    rho_hat = density_from_pauli_expectations(*project_to_ball(est))
    return TomographyResult(
        rho_hat=rho_hat,
        expectation_estimates=est,
        copies_used=1,
        predicted_std=raw.predicted_std / SHRINK,
        clone_copies=clone_budget.consumed,
    )
