"""Copy-counting estimators for linear polarization.

Four routes to the polarization angle, ordered by how many copies they
need:

* the oracles in :mod:`qmclab.oracle` (one copy, by definition);
* :func:`bisection_search`, an idealized divide-and-conquer search that
  asks a truthful half-interval question per copy;
* :func:`mle_polarization`, a physically realizable two-basis
  maximum-likelihood estimator;
* :func:`pauli_tomography`, full single-qubit tomography.

:func:`complexity_profile` turns any of them into a curve of accuracy
target against copies consumed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import xlogy

from ._rng import SeedLike, derive_seed, make_rng
from .measure import CopyBudget, sample_pauli, sample_polarization
from .oracle import exact_oracle, probabilistic_oracle
from .qstate import (
    DensityMatrix, PolarizationAngle, PureQubit, _as_density,
    density_from_pauli_expectations, make_linear_polarization, wrapped_distance,
)

__all__ = [
    "TomographyResult", "BinGrid", "UncertaintyPoint", "ProfilePoint",
    "pauli_tomography", "project_to_ball", "angle_from_bloch",
    "HalfIntervalOracle", "bisection_search",
    "mle_from_counts", "mle_polarization", "polarization_log_likelihood",
    "uncertainty_product", "complexity_profile", "ESTIMATORS",
    "circular_axis_std", "signed_axis_error",
]

MLE_GRID_POINTS = 4096
MLE_TOL = 1e-10
MLE_BASES = (0.0, math.pi / 4)
COPY_CAP = 10 ** 7


@dataclass(frozen=True)
class TomographyResult:
    """Outcome of a tomography run.

    ``copies_used`` counts copies of the original state.  When the data came
    from clones, ``clone_copies`` records how many clones were measured.
    """

    rho_hat: DensityMatrix
    expectation_estimates: tuple[float, float, float]
    copies_used: int
    predicted_std: float
    clone_copies: int = 0


def project_to_ball(t: Sequence[float]) -> tuple[float, float, float]:
    v = np.asarray(t, dtype=float)
    r = float(np.linalg.norm(v))
    if r > 1.0:
        v = v / r
    return tuple(float(c) for c in v)


def angle_from_bloch(t: Sequence[float]) -> PolarizationAngle:
    """Polarization axis of a Bloch vector ``(tx, ty, tz)``: ``atan2(tx, tz) / 2``."""
    return PolarizationAngle(0.5 * math.atan2(t[0], t[2]))


def pauli_tomography(source: DensityMatrix, m_per_axis: int, rng_seed: SeedLike,
                     budget: CopyBudget) -> TomographyResult:
    """Estimate ``tr(X rho)``, ``tr(Y rho)``, ``tr(Z rho)`` from ``m_per_axis`` shots each.

    Raw estimates are ``2 n_pass / m - 1`` and are returned unmodified; the
    reconstructed ``rho_hat`` uses the Bloch vector pulled back onto the unit
    ball when sampling noise pushed it outside.
    """
    if m_per_axis < 1:
        raise ValueError("m_per_axis must be at least 1")
    rho = _as_density(source)
    rng = make_rng(rng_seed)
    est = []
    for axis in "XYZ":
        counts = sample_pauli(rho, axis, m_per_axis, rng, budget, strategy="tomography")
        est.append(2.0 * counts.n_pass / m_per_axis - 1.0)
    rho_hat = density_from_pauli_expectations(*project_to_ball(est))
    return TomographyResult(rho_hat, tuple(est), 3 * m_per_axis, m_per_axis ** -0.5)


@dataclass(frozen=True)
class BinGrid:
    m: int
    bin_width: float
    bin_index: int

    @property
    def lo(self) -> float:
        return self.bin_index * self.bin_width

    @property
    def hi(self) -> float:
        return (self.bin_index + 1) * self.bin_width

    @property
    def center(self) -> float:
        return (self.bin_index + 0.5) * self.bin_width

    def contains(self, k: float) -> bool:
        return self.lo <= k < self.hi


class HalfIntervalOracle:
    """Truthful answer to "is the angle in the left half of ``[lo, hi)``?".

    Not realizable with one projective measurement of one photon; it models
    the idealized divide-and-conquer step.  Each query is charged as one copy.
    """

    def __init__(self, true_k: float, budget: Optional[CopyBudget] = None):
        self.true_k = float(PolarizationAngle(true_k))
        self.budget = budget if budget is not None else CopyBudget()
        self.queries = 0

    def __call__(self, lo: float, mid: float) -> bool:
        self.budget.charge(1, "bisection")
        self.queries += 1
        return lo <= self.true_k < mid


def bisection_search(half_interval_oracle: Callable[[float, float], bool], m: int) -> BinGrid:
    """Locate the angle to one of ``2**m`` equal bins on ``[0, pi)`` with ``m`` queries.

    The oracle is called as ``oracle(lo, mid)`` and must report whether the
    angle lies in ``[lo, mid)``.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    index = 0
    for step in range(m):
        # interval bounds are integer multiples of pi / 2**(step+1); same rounding
        # as BinGrid.lo/hi because scaling by powers of two is exact
        half = math.pi / 2 ** (step + 1)
        lo = (2 * index) * half
        mid = (2 * index + 1) * half
        index = 2 * index if half_interval_oracle(lo, mid) else 2 * index + 1
    return BinGrid(m, math.pi / 2 ** m, index)


def polarization_log_likelihood(k, counts: Sequence[int]) -> np.ndarray:
    """Bernoulli log-likelihood of two-basis polarizer counts.

    ``counts = (pass at 0, fail at 0, pass at pi/4, fail at pi/4)``.
    """
    k = np.asarray(k, dtype=float)
    n0p, n0m, n1p, n1m = counts
    c0, s0 = np.cos(k) ** 2, np.sin(k) ** 2
    c1, s1 = np.cos(k - MLE_BASES[1]) ** 2, np.sin(k - MLE_BASES[1]) ** 2
    return xlogy(n0p, c0) + xlogy(n0m, s0) + xlogy(n1p, c1) + xlogy(n1m, s1)


def mle_from_counts(counts: Sequence[int]) -> PolarizationAngle:
    grid = np.arange(MLE_GRID_POINTS) * (math.pi / MLE_GRID_POINTS)
    with np.errstate(divide="ignore"):
        ll = polarization_log_likelihood(grid, counts)
    best = int(np.argmax(ll))
    step = math.pi / MLE_GRID_POINTS
    bracket = (grid[best] - step, grid[best], grid[best] + step)

    def neg(k: float) -> float:
        with np.errstate(divide="ignore"):
            return -float(polarization_log_likelihood(k, counts))

    try:
        res = minimize_scalar(neg, bracket=bracket, method="golden",
                              options={"xtol": MLE_TOL})
        k = res.x if neg(res.x) <= neg(grid[best]) else grid[best]
    except ValueError:
        # flat likelihood around the grid point: nothing to refine
        k = grid[best]
    return PolarizationAngle(k)


def mle_polarization(true_state: PureQubit, n_photons: int, rng_seed: SeedLike,
                     budget: CopyBudget) -> tuple[PolarizationAngle, int]:
    """Two-basis maximum-likelihood estimate of the polarization axis.

    Half the photons (rounded down) go through a polarizer at 0, the rest
    through one at pi/4.  Returns ``(k_hat, copies_used)``.
    """
    if n_photons < 2:
        raise ValueError("mle_polarization needs at least 2 photons")
    rng = make_rng(rng_seed)
    n0 = n_photons // 2
    a = sample_polarization(true_state, MLE_BASES[0], n0, rng, budget, strategy="mle")
    b = sample_polarization(true_state, MLE_BASES[1], n_photons - n0, rng, budget,
                            strategy="mle")
    return mle_from_counts((a.n_pass, a.n_fail, b.n_pass, b.n_fail)), n_photons


@dataclass(frozen=True)
class UncertaintyPoint:
    m: int
    delta_N: int
    delta_k: float
    product: float


def uncertainty_product(m: int) -> UncertaintyPoint:
    """Photon count times bin width after ``m`` divide-and-conquer steps."""
    if m < 1:
        raise ValueError("m must be at least 1")
    dk = math.pi / 2 ** m
    return UncertaintyPoint(m, m, dk, m * dk)


def signed_axis_error(estimate, truth) -> np.ndarray:
    """Signed axis error wrapped into ``[-pi/2, pi/2)``."""
    return np.mod(np.asarray(estimate) - np.asarray(truth) + np.pi / 2, np.pi) - np.pi / 2


def circular_axis_std(errors) -> float:
    """Circular standard deviation of axis-valued (period pi) errors."""
    r = abs(np.mean(np.exp(2j * np.asarray(errors, dtype=float))))
    return math.sqrt(-2.0 * math.log(r)) / 2 if r > 0 else math.inf


# --- complexity profiles -------------------------------------------------

def _err_exact(k, n, seed, **_):
    ans = exact_oracle(make_linear_polarization(k), CopyBudget())
    return wrapped_distance(ans.estimate, k), 1


def _err_probabilistic(k, n, seed, sigma=0.1, **_):
    # n independent oracle calls, combined by a circular mean of 2k
    state = make_linear_polarization(k)
    budget = CopyBudget()
    rng = make_rng(seed)
    est = [probabilistic_oracle(state, sigma, rng, budget).estimate for _ in range(n)]
    z = np.mean(np.exp(2j * np.asarray(est)))
    return wrapped_distance(0.5 * np.angle(z), k), budget.consumed


def _err_bisection(k, n, seed, **_):
    oracle = HalfIntervalOracle(k)
    grid = bisection_search(oracle, n)
    assert grid.contains(oracle.true_k)
    # the guaranteed accuracy of a bisection answer is its bin width
    return grid.bin_width, oracle.budget.consumed


def _err_mle(k, n, seed, **_):
    budget = CopyBudget()
    k_hat, _ = mle_polarization(make_linear_polarization(k), n, seed, budget)
    return wrapped_distance(k_hat, k), budget.consumed


def _err_tomography(k, n, seed, **_):
    budget = CopyBudget()
    res = pauli_tomography(make_linear_polarization(k).density(), n // 3, seed, budget)
    return wrapped_distance(angle_from_bloch(res.expectation_estimates), k), budget.consumed


ESTIMATORS = {
    "exact_oracle": (_err_exact, 1),
    "probabilistic_oracle": (_err_probabilistic, 1),
    "bisection": (_err_bisection, 1),
    "mle": (_err_mle, 2),
    "tomography": (_err_tomography, 3),
}


@dataclass(frozen=True)
class ProfilePoint:
    target: float
    copies: int
    median_error: float
    saturated: bool = False


def complexity_profile(estimator: str, accuracy_targets: Sequence[float], trials: int,
                       rng_seed: int, copy_cap: int = COPY_CAP,
                       **options) -> list[ProfilePoint]:
    """Smallest copy count whose median wrapped error meets each target.

    For each target the copy count is doubled until the median error over
    ``trials`` seeded runs drops to the target, then refined by binary
    search.  True angles are drawn uniformly on ``[0, pi)``, one per trial,
    and reused for every copy count.  Targets not reached within
    ``copy_cap`` copies are reported with ``saturated=True``.

    ``options`` are passed to the estimator (``sigma`` for the
    probabilistic oracle).
    """
    if estimator not in ESTIMATORS:
        raise ValueError(f"unknown estimator {estimator!r}; choose from {sorted(ESTIMATORS)}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    targets = [float(t) for t in accuracy_targets]
    if any(t <= 0 for t in targets):
        raise ValueError("accuracy targets must be positive")
    if any(b > a for a, b in zip(targets, targets[1:])):
        raise ValueError("accuracy targets must be non-increasing")
    run, n_min = ESTIMATORS[estimator]
    angles = [float(make_rng(derive_seed(rng_seed, t, 0)).uniform(0.0, math.pi))
              for t in range(trials)]
    cache: dict[int, float] = {}

    def median_error(n: int) -> float:
        if n not in cache:
            errs = []
            for t, k in enumerate(angles):
                err, used = run(k, n, derive_seed(rng_seed, t, 1, n), **options)
                errs.append(err)
            cache[n] = float(np.median(errs))
        return cache[n]

    points = []
    for target in targets:
        if estimator == "exact_oracle":
            points.append(ProfilePoint(target, 1, median_error(1)))
            continue
        n = n_min
        while median_error(n) > target:
            if n >= copy_cap:
                break
            n = min(2 * n, copy_cap)
        if median_error(n) > target:
            points.append(ProfilePoint(target, n, median_error(n), saturated=True))
            continue
        lo, hi = max(n // 2, n_min - 1), n  # median_error(lo) > target (or lo below range)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if median_error(mid) <= target:
                hi = mid
            else:
                lo = mid
        points.append(ProfilePoint(target, hi, median_error(hi)))
    return points
