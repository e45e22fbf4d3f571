"""Born-rule sampling with copy accounting.

Every routine that looks at copies of a state charges a :class:`CopyBudget`
before drawing.  The number of copies a strategy consumes is the quantity
all complexity curves are built from.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._rng import SeedLike, make_rng
from .qstate import PAULI_X, PAULI_Y, PAULI_Z, DensityMatrix, PureQubit, _as_density

__all__ = [
    "BudgetExceeded", "CopyBudget", "OutcomeCounts",
    "born_probability", "draw_passes", "sample_polarization", "sample_pauli",
]

# above this many copies the pass count comes from an exact binomial draw
EXACT_DRAW_LIMIT = 10 ** 6

_AXES = {"X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}
# polarizer angle whose pass outcome is the +1 eigenstate; Y has none
_AXIS_ANGLE = {"X": math.pi / 4, "Y": None, "Z": 0.0}


class BudgetExceeded(RuntimeError):
    def __init__(self, strategy: str, requested: int, consumed: int, limit: int):
        self.strategy = strategy
        self.requested = requested
        self.consumed = consumed
        self.limit = limit
        super().__init__(
            f"strategy {strategy!r} requested {requested} copies with "
            f"{consumed}/{limit} already consumed"
        )


@dataclass
class CopyBudget:
    """Copies consumed so far, with an optional hard limit.

    A budget belongs to one trial; it is not meant to be shared between
    threads.
    """

    limit: Optional[int] = None
    consumed: int = 0

    def remaining(self) -> Optional[int]:
        return None if self.limit is None else self.limit - self.consumed

    def charge(self, n: int, strategy: str = "unnamed") -> None:
        n = int(n)
        if n < 0:
            raise ValueError("cannot charge a negative number of copies")
        if self.limit is not None and self.consumed + n > self.limit:
            raise BudgetExceeded(strategy, n, self.consumed, self.limit)
        self.consumed += n


@dataclass(frozen=True)
class OutcomeCounts:
    n_pass: int
    n_fail: int
    basis_angle: Optional[float]
    axis: Optional[str] = None

    @property
    def n(self) -> int:
        return self.n_pass + self.n_fail

    @property
    def pass_fraction(self) -> float:
        return self.n_pass / self.n if self.n else math.nan

    @property
    def mean_sign(self) -> float:
        """Mean of the +1 (pass) / -1 (fail) outcomes."""
        return (self.n_pass - self.n_fail) / self.n if self.n else math.nan


def born_probability(state: PureQubit, basis_angle: float) -> float:
    """Probability that ``state`` passes a polarizer set at ``basis_angle``."""
    amp = math.cos(basis_angle) * state.alpha + math.sin(basis_angle) * state.beta
    return min(abs(amp) ** 2, 1.0)


def draw_passes(p: float, n: int, rng: np.random.Generator) -> int:
    """Number of passes among ``n`` independent copies with pass probability ``p``.

    Up to ``EXACT_DRAW_LIMIT`` copies, one uniform draw per copy; beyond it,
    a single binomial draw from the same generator.
    """
    if n == 0:
        return 0
    if n <= EXACT_DRAW_LIMIT:
        return int(np.count_nonzero(rng.random(n) < p))
    return int(rng.binomial(n, p))


def sample_polarization(state: PureQubit, basis_angle: float, n: int,
                        rng_seed: SeedLike, budget: CopyBudget,
                        strategy: str = "polarizer") -> OutcomeCounts:
    if n < 0:
        raise ValueError("n must be non-negative")
    budget.charge(n, strategy)
    passes = draw_passes(born_probability(state, basis_angle), n, make_rng(rng_seed))
    return OutcomeCounts(passes, n - passes, float(basis_angle))


def sample_pauli(rho: DensityMatrix, axis: str, n: int, rng_seed: SeedLike,
                 budget: CopyBudget, strategy: str = "pauli") -> OutcomeCounts:
    """Measure ``n`` copies of ``rho`` along a Pauli axis; pass means outcome +1."""
    axis = axis.upper()
    if axis not in _AXES:
        raise ValueError(f"axis must be one of X, Y, Z; got {axis!r}")
    if n < 0:
        raise ValueError("n must be non-negative")
    m = _as_density(rho).entries
    t = float(np.trace(_AXES[axis] @ m).real)
    p = min(max((1.0 + t) / 2.0, 0.0), 1.0)
    budget.charge(n, strategy)
    passes = draw_passes(p, n, make_rng(rng_seed))
    return OutcomeCounts(passes, n - passes, _AXIS_ANGLE[axis], axis)
