"""Measurement oracles, the m-copy verifier, and the membership query oracle."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple, Union

import numpy as np

from ._rng import SeedLike, make_rng
from .measure import CopyBudget, born_probability, sample_polarization
from .qstate import PolarizationAngle, PureQubit, polarization_angle

__all__ = [
    "OracleAnswer", "VerifierResult", "QueryState",
    "exact_oracle", "probabilistic_oracle", "verify_claim", "verify_claim_batch",
    "false_accept_probability", "query_oracle_apply", "query_oracle_matrix",
]

TWO_PI = 2 * math.pi
# how verification photons are measured
MODES = ("batch", "sequential")


@dataclass(frozen=True)
class OracleAnswer:
    estimate: PolarizationAngle
    copies_charged: int = 1
    exact: bool = True


class VerifierResult(NamedTuple):
    accepted: bool
    confidence: float


def exact_oracle(true_state: PureQubit, budget: CopyBudget) -> OracleAnswer:
    """Read the polarization axis off a single copy.

    The simulator has direct access to the state, which is exactly what an
    oracle is allowed to assume.
    """
    budget.charge(1, "exact_oracle")
    return OracleAnswer(polarization_angle(true_state), 1, True)


def probabilistic_oracle(true_state: PureQubit, sigma: float, rng_seed: SeedLike,
                         budget: CopyBudget) -> OracleAnswer:
    """One-copy oracle whose answer carries Gaussian noise of width ``sigma``.

    ``sigma == 0`` returns the exact answer without touching the generator.
    """
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    budget.charge(1, "probabilistic_oracle")
    k = polarization_angle(true_state)
    if sigma == 0:
        return OracleAnswer(k, 1, True)
    noise = make_rng(rng_seed).normal(0.0, sigma)
    return OracleAnswer(PolarizationAngle(k + noise), 1, False)


def false_accept_probability(error: float, m: int) -> float:
    """Chance that a claim off by ``error`` survives ``m`` aligned measurements."""
    return math.cos(error) ** (2 * m)


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {', '.join(MODES)}; got {mode!r}")


def verify_claim(true_state: PureQubit, claimed_k: float, m: int,
                 rng_seed: SeedLike, budget: CopyBudget,
                 mode: str = "batch") -> VerifierResult:
    """Measure ``m`` copies with a polarizer at ``claimed_k``; accept on all passes.

    ``confidence`` is ``1 - 2**-m``: the rejection probability for a claim
    off by pi/4, where every copy passes with probability one half.

    In ``"batch"`` mode all ``m`` copies are charged up front.  In
    ``"sequential"`` mode photons are measured one at a time and the run
    stops at the first failure, so a rejection can cost fewer copies.  Both
    modes consume the same uniform stream and reach the same verdict.
    """
    if m < 1:
        raise ValueError("verifier needs m >= 1 copies")
    _check_mode(mode)
    if mode == "batch":
        counts = sample_polarization(true_state, float(claimed_k), m, rng_seed, budget,
                                     strategy="verifier")
        return VerifierResult(counts.n_pass == m, 1.0 - 2.0 ** -m)
    p = born_probability(true_state, float(claimed_k))
    rng = make_rng(rng_seed)
    for _ in range(m):
        budget.charge(1, "verifier")
        if not rng.random() < p:
            return VerifierResult(False, 1.0 - 2.0 ** -m)
    return VerifierResult(True, 1.0 - 2.0 ** -m)


def verify_claim_batch(true_state: PureQubit, claimed_k: float, m: int, trials: int,
                       rng_seed: SeedLike, budget: CopyBudget,
                       chunk: int = 1 << 18, mode: str = "batch") -> int:
    """Run ``trials`` independent verifications and return how many accepted.

    Draws one uniform per copy, ``trials * m`` in total, in chunks.  ``mode``
    only changes what is charged: every copy in ``"batch"``, copies up to and
    including the first failure in ``"sequential"``.
    """
    if m < 1:
        raise ValueError("verifier needs m >= 1 copies")
    _check_mode(mode)
    if mode == "batch":
        budget.charge(m * trials, "verifier")
    p = born_probability(true_state, float(claimed_k))
    rng = make_rng(rng_seed)
    accepted = 0
    done = 0
    while done < trials:
        size = min(chunk, trials - done)
        passed = rng.random((size, m)) < p
        ok = np.all(passed, axis=1)
        if mode == "sequential":
            used = np.where(ok, m, np.argmin(passed, axis=1) + 1)
            budget.charge(int(used.sum()), "verifier")
        accepted += int(np.count_nonzero(ok))
        done += size
    return accepted


@dataclass(frozen=True)
class QueryState:
    """Computational basis state ``|x, y>`` with an accumulated global phase."""

    x: str
    y: int
    phase: float = 0.0

    def __post_init__(self) -> None:
        if any(ch not in "01" for ch in self.x):
            raise ValueError(f"x must be a bit string, got {self.x!r}")
        if self.y not in (0, 1):
            raise ValueError("y must be 0 or 1")
        object.__setattr__(self, "phase", float(self.phase) % TWO_PI)


PhaseTable = Union[Mapping[tuple, float], Callable[[str, int], float], None]


def _phase(phases: PhaseTable, x: str, y: int) -> float:
    if phases is None:
        return 0.0
    if callable(phases):
        return float(phases(x, y))
    return float(phases.get((x, y), 0.0))


def query_oracle_apply(member_set: Iterable[str], input: QueryState,
                       phases: PhaseTable = None) -> QueryState:
    """``U|x, y> = e^{i phi_{x,y}} |x, y XOR f(x)>`` with ``f(x) = [x in member_set]``."""
    members = member_set if isinstance(member_set, (set, frozenset)) else set(member_set)
    for s in members:
        if len(s) != len(input.x):
            raise ValueError(
                f"query length {len(input.x)} does not match member length {len(s)}"
            )
        break
    f = 1 if input.x in members else 0
    return QueryState(input.x, input.y ^ f, input.phase + _phase(phases, input.x, input.y))


def query_oracle_matrix(member_set: Iterable[str], n: int,
                        phases: PhaseTable = None) -> np.ndarray:
    """Dense ``2^(n+1)``-dimensional matrix of the query oracle.

    Basis index is ``int(x, 2) * 2 + y``.  Meant for brute-force checks on
    small ``n``.
    """
    members = set(member_set)
    dim = 2 ** (n + 1)
    U = np.zeros((dim, dim), dtype=complex)
    for bits in itertools.product("01", repeat=n):
        x = "".join(bits)
        for y in (0, 1):
            out = query_oracle_apply(members, QueryState(x, y), phases)
            U[int(out.x or "0", 2) * 2 + out.y, int(x or "0", 2) * 2 + y] = np.exp(1j * out.phase)
    return U
