"""Homodyne tomography of Gaussian states.

Quadrature convention (shared with :mod:`qmclab.fock`):
``x_theta = (a e^{-i theta} + a^dag e^{i theta}) / sqrt(2)``, so a coherent
state ``|alpha0>`` gives Gaussian quadratures with mean
``sqrt(2) Re(alpha0 e^{-i theta})`` and variance 1/2, and its Wigner function
is ``exp(-(q - q0)^2 - (p - p0)^2) / pi``.

The Wigner function is recovered from the quadrature histograms by filtered
back-projection with a band-limited ramp filter::

    W(q, p) = 1/(4 pi^2) sum_j sum_i dtheta dx pr(x_i, theta_j) K(q cos theta_j + p sin theta_j - x_i)
    K(y)    = int_{-kc}^{kc} |k| e^{iky} dk = 2 (cos(kc y) + kc y sin(kc y) - 1) / y^2

with ``theta`` covering ``[0, pi)``.  As ``kc -> inf`` the kernel tends to
the principal-value kernel ``-2 / y^2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import ndtr

from ._rng import SeedLike, make_rng

__all__ = [
    "Sinogram", "WignerGrid", "sample_quadratures", "exact_sinogram",
    "analytic_wigner_coherent", "fbp_kernel", "inverse_radon", "grid_axis",
    "default_axes", "quadrature_mean",
]

QUADRATURE_VAR = 0.5
DEFAULT_X_BINS = 240
DEFAULT_KC = 5.0


def quadrature_mean(alpha0: complex, theta) -> np.ndarray:
    return math.sqrt(2) * np.real(complex(alpha0) * np.exp(-1j * np.asarray(theta)))


def _default_x_range(alpha0: complex) -> tuple[float, float]:
    half = abs(complex(alpha0)) * math.sqrt(2) + 5.0
    return (-half, half)


@dataclass(frozen=True)
class Sinogram:
    """Histogrammed quadrature samples, one row per local-oscillator phase.

    ``counts[j, i]`` is the number of samples (or, for :func:`exact_sinogram`,
    the probability mass) at phase ``j * pi / theta_bins`` falling into the
    ``i``-th of ``x_bins`` equal bins spanning ``x_range``.
    """

    theta_bins: int
    x_bins: int
    x_range: tuple[float, float]
    counts: np.ndarray
    sample_means: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        c = np.asarray(self.counts, dtype=float)
        if c.shape != (self.theta_bins, self.x_bins):
            raise ValueError(f"counts shape {c.shape} != ({self.theta_bins}, {self.x_bins})")
        object.__setattr__(self, "counts", c)

    @property
    def thetas(self) -> np.ndarray:
        return np.arange(self.theta_bins) * (math.pi / self.theta_bins)

    @property
    def x_edges(self) -> np.ndarray:
        return np.linspace(self.x_range[0], self.x_range[1], self.x_bins + 1)

    @property
    def x_centers(self) -> np.ndarray:
        e = self.x_edges
        return 0.5 * (e[1:] + e[:-1])

    @property
    def dx(self) -> float:
        return (self.x_range[1] - self.x_range[0]) / self.x_bins

    def density(self) -> np.ndarray:
        """Rows normalized to probability densities over ``x``."""
        totals = self.counts.sum(axis=1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(totals > 0, self.counts / (totals * self.dx), 0.0)


@dataclass(frozen=True)
class WignerGrid:
    q_axis: np.ndarray
    p_axis: np.ndarray
    values: np.ndarray  # values[i, j] = W(q_axis[i], p_axis[j])

    @property
    def cell_area(self) -> float:
        return float((self.q_axis[1] - self.q_axis[0]) * (self.p_axis[1] - self.p_axis[0]))

    def integral(self) -> float:
        return float(self.values.sum() * self.cell_area)

    def peak(self) -> tuple[float, float]:
        i, j = np.unravel_index(np.argmax(self.values), self.values.shape)
        return float(self.q_axis[i]), float(self.p_axis[j])


def grid_axis(half_width: float, step: float, center: float = 0.0) -> np.ndarray:
    n = int(round(half_width / step))
    return center + step * np.arange(-n, n + 1)


def default_axes(alpha0: complex, step: float = 0.1) -> tuple[np.ndarray, np.ndarray]:
    """Square grid covering ``+-(|alpha0| sqrt 2 + 4)`` in both quadratures."""
    half = abs(complex(alpha0)) * math.sqrt(2) + 4.0
    ax = grid_axis(half, step)
    return ax, ax.copy()


def sample_quadratures(alpha0: complex, n_per_angle: int, theta_bins: int,
                       rng_seed: SeedLike, x_range: Optional[tuple[float, float]] = None,
                       x_bins: int = DEFAULT_X_BINS) -> Sinogram:
    """Simulate homodyne detection of ``|alpha0>`` at ``theta_bins`` equally spaced phases."""
    if n_per_angle < 1 or theta_bins < 1:
        raise ValueError("n_per_angle and theta_bins must be at least 1")
    x_range = tuple(x_range) if x_range is not None else _default_x_range(alpha0)
    rng = make_rng(rng_seed)
    thetas = np.arange(theta_bins) * (math.pi / theta_bins)
    means = quadrature_mean(alpha0, thetas)
    edges = np.linspace(x_range[0], x_range[1], x_bins + 1)
    counts = np.empty((theta_bins, x_bins))
    sample_means = np.empty(theta_bins)
    sd = math.sqrt(QUADRATURE_VAR)
    for j, mu in enumerate(means):
        x = rng.normal(mu, sd, n_per_angle)
        counts[j] = np.histogram(x, edges)[0]
        sample_means[j] = x.mean()
    return Sinogram(theta_bins, x_bins, x_range, counts, sample_means)


def exact_sinogram(alpha0: complex, theta_bins: int,
                   x_range: Optional[tuple[float, float]] = None,
                   x_bins: int = DEFAULT_X_BINS) -> Sinogram:
    """Noise-free sinogram: exact Gaussian probability mass in each bin."""
    x_range = tuple(x_range) if x_range is not None else _default_x_range(alpha0)
    thetas = np.arange(theta_bins) * (math.pi / theta_bins)
    means = quadrature_mean(alpha0, thetas)
    edges = np.linspace(x_range[0], x_range[1], x_bins + 1)
    cdf = ndtr((edges[None, :] - means[:, None]) / math.sqrt(QUADRATURE_VAR))
    return Sinogram(theta_bins, x_bins, x_range, np.diff(cdf, axis=1), means)


def analytic_wigner_coherent(alpha0: complex, q_axis=None, p_axis=None,
                             step: float = 0.05) -> WignerGrid:
    if q_axis is None or p_axis is None:
        q_axis, p_axis = default_axes(alpha0, step)
    q_axis = np.asarray(q_axis, dtype=float)
    p_axis = np.asarray(p_axis, dtype=float)
    q0 = math.sqrt(2) * complex(alpha0).real
    p0 = math.sqrt(2) * complex(alpha0).imag
    values = np.exp(-np.add.outer((q_axis - q0) ** 2, (p_axis - p0) ** 2)) / math.pi
    return WignerGrid(q_axis, p_axis, values)


def fbp_kernel(y, k_c: float) -> np.ndarray:
    """Band-limited ramp kernel; ``K(0) = k_c**2``."""
    y = np.asarray(y, dtype=float)
    u = k_c * y
    small = np.abs(u) < 1e-3
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = 2.0 * (np.cos(u) + u * np.sin(u) - 1.0) / (y * y)
    # Taylor series: k_c^2 (1 - u^2/4 + u^4/72)
    series = k_c * k_c * (1.0 - u * u / 4.0 + u ** 4 / 72.0)
    return np.where(small, series, direct)


def _backproject(q: np.ndarray, p: np.ndarray, sino: Sinogram, k_c: float,
                 chunk: int) -> np.ndarray:
    pr = sino.density()
    xc = sino.x_centers
    out = np.zeros(q.size)
    for j, theta in enumerate(sino.thetas):
        nz = np.nonzero(pr[j])[0]
        if nz.size == 0:
            continue
        w = pr[j, nz]
        x = xc[nz]
        cx, sx = np.cos(k_c * x), np.sin(k_c * x)
        t = q * math.cos(theta) + p * math.sin(theta)
        for s in range(0, t.size, chunk):
            ts = t[s:s + chunk]
            ct, st = np.cos(k_c * ts), np.sin(k_c * ts)
            # cos(u), sin(u) for u = k_c (t - x) via angle addition
            cos_u = np.multiply.outer(ct, cx)
            cos_u += np.multiply.outer(st, sx)
            sin_u = np.multiply.outer(st, cx)
            sin_u -= np.multiply.outer(ct, sx)
            y = np.subtract.outer(ts, x)
            u = k_c * y
            sin_u *= u
            cos_u += sin_u
            cos_u -= 1.0
            small = np.abs(u) < 1e-3
            with np.errstate(divide="ignore", invalid="ignore"):
                kern = 2.0 * cos_u / (y * y)
            if small.any():
                kern[small] = fbp_kernel(y[small], k_c)
            out[s:s + chunk] += kern @ w
    return out


def inverse_radon(sinogram: Sinogram, k_c: float = DEFAULT_KC, q_axis=None, p_axis=None,
                  step: float = 0.1) -> WignerGrid:
    """Reconstruct the Wigner function on a rectangular grid by filtered back-projection.

    Without explicit axes the grid spans ``x_range`` shrunk by one unit on
    each side, at spacing ``step``.
    """
    if k_c <= 0:
        raise ValueError("cutoff k_c must be positive")
    if sinogram.theta_bins < 1 or sinogram.x_bins < 1 or not np.any(sinogram.counts):
        raise ValueError("empty sinogram")
    if q_axis is None or p_axis is None:
        half = max(abs(sinogram.x_range[0]), abs(sinogram.x_range[1])) - 1.0
        q_axis = grid_axis(half, step)
        p_axis = q_axis.copy()
    q_axis = np.asarray(q_axis, dtype=float)
    p_axis = np.asarray(p_axis, dtype=float)
    Q, P = np.meshgrid(q_axis, p_axis, indexing="ij")
    chunk = max(1, 1_000_000 // sinogram.x_bins)
    acc = _backproject(Q.ravel(), P.ravel(), sinogram, k_c, chunk)
    scale = (math.pi / sinogram.theta_bins) * sinogram.dx / (4.0 * math.pi ** 2)
    return WignerGrid(q_axis, p_axis, (scale * acc).reshape(Q.shape))
