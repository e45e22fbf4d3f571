"""Truncated Fock-space numerics for a single bosonic mode.

Natural units hbar = m = omega = 1 throughout.  With these units
``a = (x + i p) / sqrt(2)``, so ``x = (a + a^dag) / sqrt(2)`` and the
vacuum has ``Var(x) = Var(p) = 1/2``.  Rotated quadratures
``x_theta = (a e^{-i theta} + a^dag e^{i theta}) / sqrt(2)`` use the same
convention as :mod:`qmclab.wigner`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import gammaln
from scipy.stats import poisson

__all__ = [
    "TruncationError", "FockVector", "OperatorMatrix", "OscillatorOperators",
    "UncertaintyReport", "coherent_state", "oscillator_operators",
    "uncertainty_check", "phase_distribution", "phase_statistics",
    "number_statistics", "lowering_shift", "edge_weight",
]

_NORM_TOL = 1e-9
_LEAKAGE_TOL = 1e-8
_EDGE_LEVELS = 4
_EDGE_WEIGHT = 1e-6


class TruncationError(ValueError):
    """The truncated basis is too small for the requested state."""


@dataclass(frozen=True)
class FockVector:
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        c = np.array(self.amplitudes, dtype=complex).ravel()
        if c.size < 1:
            raise ValueError("empty Fock vector")
        norm = float(np.vdot(c, c).real)
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"Fock vector not normalized (norm^2 = {norm!r})")
        c.setflags(write=False)
        object.__setattr__(self, "amplitudes", c)

    @classmethod
    def from_amplitudes(cls, c: ArrayLike, normalize: bool = True) -> "FockVector":
        c = np.asarray(c, dtype=complex)
        if normalize:
            c = c / np.linalg.norm(c)
        return cls(c)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class OperatorMatrix:
    entries: np.ndarray
    units: str = "dimensionless"

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        m = self.entries
        return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.entries @ other.entries)


class OscillatorOperators(NamedTuple):
    a: OperatorMatrix
    adag: OperatorMatrix
    N: OperatorMatrix
    x: OperatorMatrix
    p: OperatorMatrix
    H: OperatorMatrix


@dataclass(frozen=True)
class UncertaintyReport:
    deltaA: float
    deltaB: float
    bound: float
    satisfied: bool
    truncation_edge: bool = False

    @property
    def product(self) -> float:
        return self.deltaA * self.deltaB


def coherent_state(alpha0: complex, D: int) -> FockVector:
    """Coherent state ``|alpha0>`` truncated to ``D`` levels and renormalized.

    Raises :class:`TruncationError` if the discarded Poisson tail exceeds 1e-8.
    """
    if D < 1:
        raise ValueError("D must be at least 1")
    alpha0 = complex(alpha0)
    mean = abs(alpha0) ** 2
    leakage = float(poisson.sf(D - 1, mean)) if mean > 0 else 0.0
    if leakage >= _LEAKAGE_TOL:
        raise TruncationError(
            f"D={D} discards probability {leakage:.3g} for |alpha0|={abs(alpha0):.3g}"
        )
    n = np.arange(D)
    if mean == 0.0:
        c = (n == 0).astype(complex)
    else:
        logmag = -mean / 2 + n * math.log(abs(alpha0)) - 0.5 * gammaln(n + 1)
        c = np.exp(logmag) * np.exp(1j * n * np.angle(alpha0))
    return FockVector(c / np.linalg.norm(c))


def oscillator_operators(D: int) -> OscillatorOperators:
    if D < 2:
        raise ValueError("D must be at least 2")
    a = np.diag(np.sqrt(np.arange(1, D, dtype=float)), k=1).astype(complex)
    adag = a.conj().T
    N = adag @ a
    x = (a + adag) / math.sqrt(2)
    p = (a - adag) / (1j * math.sqrt(2))
    H = (p @ p + x @ x) / 2
    return OscillatorOperators(
        OperatorMatrix(a),
        OperatorMatrix(adag),
        OperatorMatrix(N),
        OperatorMatrix(x, "position"),
        OperatorMatrix(p, "momentum"),
        OperatorMatrix(H, "energy"),
    )


def lowering_shift(D: int) -> np.ndarray:
    """One-sided shift ``E = sum_n |n><n+1|``, the truncated ``e^{i theta}``."""
    return np.eye(D, k=1, dtype=complex)


def edge_weight(psi: FockVector, levels: int = _EDGE_LEVELS) -> float:
    return float(np.sum(psi.probabilities()[-levels:]))


def _expect(op: np.ndarray, c: np.ndarray) -> complex:
    return complex(np.vdot(c, op @ c))


def uncertainty_check(A: OperatorMatrix, B: OperatorMatrix, psi: FockVector,
                      tol: float = 1e-8) -> UncertaintyReport:
    """Compare ``dA dB`` with ``|<[A, B]>| / 2`` for the state ``psi``.

    ``truncation_edge`` is set when more than 1e-6 of the state's weight sits
    in the top four levels; products involving raising operators are not
    trustworthy there.
    """
    a, b = np.asarray(A.entries), np.asarray(B.entries)
    if a.shape != b.shape or a.shape != (psi.dim, psi.dim):
        raise ValueError(
            f"dimension mismatch: A {a.shape}, B {b.shape}, psi has {psi.dim} levels"
        )
    if not (A.is_hermitian() and B.is_hermitian()):
        raise ValueError("uncertainty_check needs Hermitian operators")
    c = psi.amplitudes
    mean_a, mean_b = _expect(a, c).real, _expect(b, c).real
    var_a = max(_expect(a @ a, c).real - mean_a ** 2, 0.0)
    var_b = max(_expect(b @ b, c).real - mean_b ** 2, 0.0)
    bound = 0.5 * abs(_expect(a @ b - b @ a, c))
    da, db = math.sqrt(var_a), math.sqrt(var_b)
    return UncertaintyReport(
        deltaA=da,
        deltaB=db,
        bound=bound,
        satisfied=da * db >= bound - tol,
        truncation_edge=edge_weight(psi) > _EDGE_WEIGHT,
    )


def number_statistics(psi: FockVector) -> tuple[float, float]:
    """Mean photon number and its standard deviation."""
    prob = psi.probabilities()
    n = np.arange(psi.dim)
    mean = float(prob @ n)
    return mean, math.sqrt(max(float(prob @ n ** 2) - mean ** 2, 0.0))


def phase_distribution(psi: FockVector) -> tuple[np.ndarray, np.ndarray]:
    """Distribution over the ``D`` discrete phase states of the truncated space.

    The phase states are ``|theta_j> = D^{-1/2} sum_{n=0}^{D-1} e^{i n theta_j} |n>``
    with ``theta_j = 2 pi j / D``.  They form an orthonormal basis, so the
    returned probabilities sum to one.
    """
    D = psi.dim
    theta = 2 * np.pi * np.arange(D) / D
    # <theta_j|psi> = D^{-1/2} sum_n e^{-i n theta_j} c_n, i.e. an unnormalized DFT
    amp = np.fft.fft(psi.amplitudes) / math.sqrt(D)
    prob = np.abs(amp) ** 2
    return theta, prob / prob.sum()


def phase_statistics(psi: FockVector) -> tuple[float, float]:
    """Circular mean phase and the phase spread about it.

    The spread is the ordinary standard deviation of ``theta`` measured in the
    window ``(mean - pi, mean + pi]``.  A uniform distribution therefore gives
    ``pi / sqrt(3)`` in the large-``D`` limit.  When the distribution has no
    preferred direction (zero resultant), the mean is reported as 0.
    """
    theta, prob = phase_distribution(psi)
    resultant = complex(np.sum(prob * np.exp(1j * theta)))
    mean = math.atan2(resultant.imag, resultant.real) if abs(resultant) > 1e-12 else 0.0
    d = np.angle(np.exp(1j * (theta - mean)))
    d[d <= -np.pi] += 2 * np.pi
    first = float(prob @ d)
    spread = math.sqrt(max(float(prob @ d ** 2) - first ** 2, 0.0))
    return mean, spread
