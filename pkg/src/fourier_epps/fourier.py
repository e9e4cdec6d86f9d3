"""Fourier coefficients of price increments observed at irregular times.

For a tick series rescaled to ``[0, 2*pi]`` the coefficient of mode ``k`` is

    F(dX)(k) = 1/(2*pi) * sum_h exp(-1j * k * t_h) * (X[t_{h+1}] - X[t_h])

Two evaluation routes are provided: an exact direct sum and a type-1
non-uniform FFT (spread onto an oversampled grid with an
exponential-of-semicircle window, FFT, divide out the window transform).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.fft

from .data import TWO_PI, TickSeries
from .errors import BadTolerance, DataError, InsufficientData


@dataclass(frozen=True)
class FourierCoeffs:
    """Complex coefficients for the contiguous modes ``k_min..k_max``."""

    k_min: int
    k_max: int
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.k_max - self.k_min + 1,):
            raise DataError("coefficient array does not match the mode range")

    @property
    def modes(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    def __getitem__(self, k):
        if isinstance(k, slice):
            raise TypeError("use window() for ranges")
        return self.values[k - self.k_min]

    def covers(self, lo: int, hi: int) -> bool:
        return self.k_min <= lo and hi <= self.k_max

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Values for modes ``lo..hi`` inclusive (a view)."""
        if not self.covers(lo, hi):
            raise IndexError(f"modes {lo}..{hi} outside {self.k_min}..{self.k_max}")
        return self.values[lo - self.k_min: hi - self.k_min + 1]


def _check_input(series: TickSeries, k_min: int, k_max: int):
    if len(series) < 2:
        raise InsufficientData("need at least 2 observations")
    if k_max < k_min:
        raise DataError("k_max must be >= k_min")
    if series.times[0] < 0 or series.times[-1] > TWO_PI * (1 + 1e-12):
        raise DataError("series must be rescaled to [0, 2*pi] first")


def _direct(t: np.ndarray, c: np.ndarray, k_min: int, k_max: int) -> np.ndarray:
    # exact sum with the exponent split as k = k_min + a*B + b, so that
    # exp(-i k t) = exp(-i (k_min + a B) t) * exp(-i b t) and the double sum
    # becomes one complex matrix product; every term keeps machine precision
    n_modes = k_max - k_min + 1
    B = max(1, math.isqrt(n_modes))
    A = -(-n_modes // B)
    coarse = np.exp(-1j * np.outer(k_min + B * np.arange(A, dtype=float), t))
    fine = np.exp(-1j * np.outer(np.arange(B, dtype=float), t)) * c
    return (coarse @ fine.T).ravel()[:n_modes]


def price_coeffs_direct(series: TickSeries, k_min: int, k_max: int) -> FourierCoeffs:
    """Exact evaluation of the increment coefficients (O(n K))."""
    _check_input(series, k_min, k_max)
    vals = _direct(series.times[:-1], series.increments, k_min, k_max) / TWO_PI
    return FourierCoeffs(k_min, k_max, vals)


# ---------------------------------------------------------------------------
# type-1 NUFFT


def _kernel_width(tol: float) -> int:
    # exponential-of-semicircle window at upsampling 2; one point wider than
    # the usual 10^-(w-1) rule so the worst single-mode error stays below tol
    return min(16, max(3, math.ceil(-math.log10(tol)) + 2))


def _es_kernel(z: np.ndarray, beta: float) -> np.ndarray:
    """exp(beta * (sqrt(1 - z^2) - 1)) on |z| <= 1, zero outside."""
    inside = np.abs(z) < 1.0
    out = np.zeros_like(z)
    out[inside] = np.exp(beta * (np.sqrt(1.0 - z[inside] ** 2) - 1.0))
    return out


@lru_cache(maxsize=16)
def _es_transform(half: int, half_width: float, beta: float) -> np.ndarray:
    """Fourier transform of psi(x) = phi(x / half_width) at k = 0..half.

    With z = sin(theta) the integrand is smooth, so 40 Gauss-Legendre nodes on
    [0, pi/2] give full double precision.
    """
    u, wts = np.polynomial.legendre.leggauss(40)
    theta = 0.25 * np.pi * (u + 1.0)
    g = np.exp(beta * (np.cos(theta) - 1.0)) * np.cos(theta) * wts * (0.25 * np.pi)
    # psi_hat(k) = 2 hw sum_j g_j cos(k hw sin(theta_j)); the cosine sum is the real part of _direct
    out = 2.0 * half_width * _direct(half_width * np.sin(theta), g, 0, half).real
    out.flags.writeable = False
    return out


def nufft1(x: np.ndarray, c: np.ndarray, k_min: int, k_max: int, tol: float = 1e-12) -> np.ndarray:
    """Type-1 NUFFT: ``f[k] = sum_j c[j] exp(-1j k x[j])`` for ``k_min <= k <= k_max``.

    ``x`` must lie in ``[0, 2*pi]``; ``c`` may be real or complex.
    """
    x = np.asarray(x, dtype=float)
    c = np.asarray(c)
    # shift the modes to a symmetric window around 0 via a phase on the strengths
    center = (k_min + k_max) // 2
    half = max(k_max - center, center - k_min)
    if center != 0:
        c = c * np.exp(-1j * center * x)

    w = _kernel_width(tol)
    beta = 2.30 * w
    n_modes = 2 * half + 1
    nf = scipy.fft.next_fast_len(max(2 * n_modes, 2 * w, 16))
    nf += nf % 2
    h = TWO_PI / nf
    half_width = 0.5 * w * h

    # spread: each point touches w consecutive grid cells
    xs = np.mod(x, TWO_PI)
    first = np.ceil(xs / h - 0.5 * w).astype(np.int64)
    offsets = np.arange(w)
    cells = first[:, None] + offsets[None, :]
    weights = _es_kernel((cells * h - xs[:, None]) / half_width, beta)
    idx = np.mod(cells, nf).ravel()
    contrib = (weights * c[:, None]).ravel()
    if np.iscomplexobj(contrib):
        grid = np.bincount(idx, contrib.real, nf) + 1j * np.bincount(idx, contrib.imag, nf)
    else:
        grid = np.bincount(idx, contrib, nf).astype(complex)

    spec = scipy.fft.fft(grid)
    k = np.arange(-half, half + 1)
    f = spec[np.mod(k, nf)] * (h / _es_transform(half, half_width, beta)[np.abs(k)])
    lo = k_min - center + half
    return f[lo: lo + (k_max - k_min + 1)]


def price_coeffs_fast(series: TickSeries, k_min: int, k_max: int, tolerance: float = 1e-12) -> FourierCoeffs:
    """NUFFT evaluation of the increment coefficients.

    The absolute error per mode is bounded by about
    ``max(tolerance, 5e-12) * sum|dX| / (2*pi)``; below ~1e-11 the bound is
    set by double-precision roundoff in the deconvolution.
    """
    if not (0 < tolerance <= 1e-4):
        raise BadTolerance(f"tolerance must lie in (0, 1e-4], got {tolerance}")
    _check_input(series, k_min, k_max)
    vals = nufft1(series.times[:-1], series.increments, k_min, k_max, tolerance) / TWO_PI
    return FourierCoeffs(k_min, k_max, vals)


def price_coeffs(series: TickSeries, k_max: int, method: str = "fast", tolerance: float = 1e-12) -> FourierCoeffs:
    """Coefficients on the symmetric range ``-k_max..k_max``."""
    if method == "fast":
        return price_coeffs_fast(series, -k_max, k_max, tolerance)
    if method == "direct":
        return price_coeffs_direct(series, -k_max, k_max)
    raise ValueError(f"unknown method {method!r}")
