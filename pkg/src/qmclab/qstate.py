"""Single-qubit polarization algebra.

Basis convention: ``|H> = (1, 0)``, ``|V> = (0, 1)`` and ``Z|H> = +|H>``.
A linearly polarized photon at angle ``k`` is ``cos k |H> + sin k |V>``;
its Bloch vector is ``(sin 2k, 0, cos 2k)``.

The single-photon Stokes operators are Pauli matrices.  They are ordered
so that their expectations reproduce the textbook Stokes parameters
(``S1 = Z``, ``S2 = X``, ``S3 = Y``); being a cyclic relabelling of
``(X, Y, Z)`` this keeps ``[S_i, S_j] = 2i eps_ijk S_k``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

__all__ = [
    "IDENTITY", "PAULI_X", "PAULI_Y", "PAULI_Z", "PAULI", "STOKES_OPERATORS",
    "PolarizationAngle", "PureQubit", "DensityMatrix", "StokesVector",
    "make_linear_polarization", "stokes_parameters",
    "density_from_pauli_expectations", "pauli_expectations",
    "fidelity", "fidelity_closed_form", "overlap_fidelity",
    "polarization_angle", "wrapped_distance", "levi_civita",
]

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (PAULI_X, PAULI_Y, PAULI_Z)
STOKES_OPERATORS = (IDENTITY, PAULI_Z, PAULI_X, PAULI_Y)

for _m in (IDENTITY, *PAULI):
    _m.setflags(write=False)

_NORM_TOL = 1e-12
_HERM_TOL = 1e-12
_PSD_TOL = 1e-10
_BALL_TOL = 1e-9


def levi_civita(i: int, j: int, k: int) -> int:
    """Totally antisymmetric symbol on indices 0, 1, 2."""
    return (i - j) * (j - k) * (k - i) // 2


class PolarizationAngle(float):
    """A polarization axis angle, always stored in ``[0, pi)``."""

    def __new__(cls, k: float) -> "PolarizationAngle":
        r = math.fmod(float(k), math.pi)
        if r < 0.0:
            r += math.pi
        if r >= math.pi:  # -tiny % pi rounds up to pi
            r = 0.0
        return super().__new__(cls, r)

    def __repr__(self) -> str:
        return f"PolarizationAngle({float(self)!r})"


def wrapped_distance(a: float | ArrayLike, b: float | ArrayLike) -> np.ndarray | float:
    """Axis distance ``min(|a-b|, pi-|a-b|)`` after reducing both angles mod pi."""
    d = np.abs(np.mod(a, np.pi) - np.mod(b, np.pi))
    out = np.minimum(d, np.pi - d)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class PureQubit:
    """Normalized amplitudes over ``{|H>, |V>}``."""

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"state is not normalized: |alpha|^2+|beta|^2 = {norm!r}")

    @classmethod
    def from_vector(cls, v: ArrayLike, normalize: bool = False) -> "PureQubit":
        v = np.asarray(v, dtype=complex).reshape(2)
        if normalize:
            n = np.linalg.norm(v)
            if n == 0:
                raise ValueError("zero vector has no direction")
            v = v / n
        return cls(v[0], v[1])

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=complex)

    def density(self) -> "DensityMatrix":
        v = self.vector
        return DensityMatrix(np.outer(v, v.conj()))


class DensityMatrix:
    """Validated 2x2 density matrix; ``entries`` is a read-only array."""

    __slots__ = ("_entries",)

    def __init__(self, entries: ArrayLike):
        m = np.array(entries, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > _HERM_TOL:
            raise ValueError("matrix is not Hermitian")
        tr = np.trace(m).real
        if abs(tr - 1.0) > _HERM_TOL:
            raise ValueError(f"trace is {tr!r}, expected 1")
        m = 0.5 * (m + m.conj().T)
        lo = _eigvalsh2(m)[0]
        if lo < -_PSD_TOL:
            raise ValueError(f"matrix is not positive semidefinite (eigenvalue {lo!r})")
        m.setflags(write=False)
        self._entries = m

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    def __array__(self, dtype=None, copy=None):
        return np.array(self._entries, dtype=dtype)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DensityMatrix):
            return NotImplemented
        return bool(np.array_equal(self._entries, other._entries))

    def __repr__(self) -> str:
        return f"DensityMatrix({self._entries.tolist()!r})"

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix":
        return cls(IDENTITY / 2)


def _as_density(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


@dataclass(frozen=True)
class StokesVector:
    s0: float
    s1: float
    s2: float
    s3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.s0, self.s1, self.s2, self.s3])


def make_linear_polarization(k: float) -> PureQubit:
    k = PolarizationAngle(k)
    return PureQubit(math.cos(k), math.sin(k))


def stokes_parameters(state: PureQubit) -> StokesVector:
    a, b = state.alpha, state.beta
    ac, bc = a.conjugate(), b.conjugate()
    return StokesVector(
        (ac * a + bc * b).real,
        (ac * a - bc * b).real,
        (ac * b + a * bc).real,
        (-1j * (ac * b - a * bc)).real,
    )


def polarization_angle(state: PureQubit) -> PolarizationAngle:
    """Axis angle of the state's projection onto the Poincare equator."""
    s = stokes_parameters(state)
    return PolarizationAngle(0.5 * math.atan2(s.s2, s.s1))


def density_from_pauli_expectations(tx: float, ty: float, tz: float) -> DensityMatrix:
    """Build ``rho = (I + tx X + ty Y + tz Z) / 2``.

    Raises ``ValueError`` when the Bloch vector lies outside the unit ball.
    """
    r = math.sqrt(tx * tx + ty * ty + tz * tz)
    if r > 1.0 + _BALL_TOL:
        raise ValueError(f"Bloch vector norm {r!r} exceeds 1: not a physical state")
    return DensityMatrix((IDENTITY + tx * PAULI_X + ty * PAULI_Y + tz * PAULI_Z) / 2)


def pauli_expectations(rho: DensityMatrix) -> tuple[float, float, float]:
    m = _as_density(rho).entries
    return (
        float(np.trace(PAULI_X @ m).real),
        float(np.trace(PAULI_Y @ m).real),
        float(np.trace(PAULI_Z @ m).real),
    )


def _eigvalsh2(h: np.ndarray) -> tuple[float, float]:
    # closed form for a 2x2 Hermitian matrix; ascending order
    a, d = h[0, 0].real, h[1, 1].real
    mid = 0.5 * (a + d)
    rad = math.hypot(0.5 * (a - d), abs(h[0, 1]))
    return mid - rad, mid + rad


def _eigh2(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # h = mid*I + rad*(n . sigma); eigenvectors are the Bloch states +-n
    lo, hi = _eigvalsh2(h)
    rad = 0.5 * (hi - lo)
    if rad > 0.0:
        b = h[0, 1]
        nz = min(max(0.5 * (h[0, 0].real - h[1, 1].real) / rad, -1.0), 1.0)
        theta = math.acos(nz)
        phi = math.atan2(-b.imag, b.real)
    else:
        theta = phi = 0.0
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    up = np.array([c, np.exp(1j * phi) * s])
    down = np.array([-np.exp(-1j * phi) * s, c])
    return np.array([lo, hi]), np.column_stack([down, up])


# smallest eigenvalue treated as exactly zero by :func:`fidelity`
RANK_ONE_TOL = 64 * np.finfo(float).eps


def _sqrtm_psd(h: np.ndarray) -> np.ndarray:
    w, v = _eigh2(h)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity ``tr sqrt(sqrt(rho) sigma sqrt(rho))`` by spectral decomposition.

    This is the square-root convention: for a pure ``rho = |psi><psi|`` it
    equals ``sqrt(<psi|sigma|psi>)``.  See :func:`overlap_fidelity` for the
    squared form.
    """
    r = _as_density(rho).entries
    s = _as_density(sigma).entries
    # a rank-one argument at rounding level: the square root of its noise
    # eigenvalue would otherwise leak ~1e-8 into the result
    for a, b in ((r, s), (s, r)):
        w, v = _eigh2(a)
        if w[0] <= RANK_ONE_TOL:
            top = v[:, 1]
            f = math.sqrt(max(w[1] * (top.conj() @ b @ top).real, 0.0))
            return min(f, 1.0)
    sr = _sqrtm_psd(r)
    inner = sr @ s @ sr
    inner = 0.5 * (inner + inner.conj().T)
    w, _ = _eigh2(inner)
    f = float(np.sum(np.sqrt(np.clip(w, 0.0, None))))
    return min(max(f, 0.0), 1.0)


def fidelity_closed_form(rho, sigma) -> float:
    """Qubit-only form: ``F^2 = tr(rho sigma) + 2 sqrt(det rho det sigma)``."""
    r = _as_density(rho).entries
    s = _as_density(sigma).entries
    det_r = max(np.linalg.det(r).real, 0.0)
    det_s = max(np.linalg.det(s).real, 0.0)
    f2 = np.trace(r @ s).real + 2.0 * math.sqrt(det_r * det_s)
    return min(max(math.sqrt(max(f2, 0.0)), 0.0), 1.0)


def overlap_fidelity(reference, sigma) -> float:
    """``tr(reference sigma)``; equals ``<psi|sigma|psi>`` for a pure reference."""
    if isinstance(reference, PureQubit):
        v = reference.vector
        return float((v.conj() @ _as_density(sigma).entries @ v).real)
    return float(np.trace(_as_density(reference).entries @ _as_density(sigma).entries).real)
