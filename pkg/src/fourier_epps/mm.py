"""Malliavin-Mancino spot and integrated (co)variance estimation.

Both series are rescaled to ``[0, 2*pi]``; the volatility coefficients are
the Bohr convolution of the price-increment coefficients and the spot path
is their Fejer-weighted inversion. Outputs are in variance per session, so
a model simulated on ``T = 1`` recovers its own ``sigma^2``.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .data import TWO_PI, TickSeries, rescale_to_two_pi
from .errors import BadTimescale, ConfigError, DataError, ModeRangeTooNarrow
from .fourier import FourierCoeffs, price_coeffs

logger = logging.getLogger(__name__)

KERNELS = ("dirichlet", "fejer")


def n_from_dt(dt: float, T: float) -> int:
    """Cutting frequency implied by a sampling interval: ``floor((T/dt - 1) / 2)``."""
    if not dt > 0:
        raise BadTimescale(f"dt must be positive, got {dt}")
    if dt > T:
        raise BadTimescale(f"dt={dt} exceeds the session length T={T}")
    ratio = T / dt
    # T/dt is often an exact integer mathematically; keep it from rounding just below
    r = round(ratio)
    if abs(ratio - r) <= 1e-9 * ratio:
        ratio = r
    return math.floor(0.5 * (ratio - 1))


@dataclass(frozen=True)
class MmConfig:
    """Cutting frequency ``N``, reconstruction frequency ``M`` and the evaluation grid size."""

    N: int
    M: int
    grid_points: int = 1000

    def __post_init__(self):
        if self.N < 1 or self.M < 1:
            raise ConfigError(f"N and M must be positive integers (N={self.N}, M={self.M})")
        if self.grid_points < 2:
            raise ConfigError("grid_points must be at least 2")
        if self.M > self.N:
            raise ConfigError(f"M={self.M} exceeds N={self.N}")
        if self.M > self.N / 2:
            warnings.warn(f"M={self.M} > N/2={self.N / 2}: the reconstruction may alias", stacklevel=3)

    @classmethod
    def from_dt(cls, dt: float, T: float, M: int, grid_points: int = 1000) -> "MmConfig":
        return cls(n_from_dt(dt, T), M, grid_points)


@dataclass
class SpotPath:
    """Spot (co)variance estimates on an evaluation grid.

    ``s22``, ``s12`` and ``rho`` are ``None`` for a univariate estimate.
    Entries at times with ``valid == False`` must not be used; they are left
    as computed (or NaN where undefined) rather than clamped.
    ``imag_residual`` is the largest imaginary part left by the Fourier
    inversion relative to the largest real part.
    """

    eval_times: np.ndarray
    s11: np.ndarray
    s22: np.ndarray | None = None
    s12: np.ndarray | None = None
    rho: np.ndarray | None = None
    valid: np.ndarray | None = None
    imag_residual: float = 0.0

    def __post_init__(self):
        if self.valid is None:
            self.valid = np.isfinite(self.s11)


def _correlation(s11, s22, s12):
    with np.errstate(invalid="ignore", divide="ignore"):
        pos = (s11 > 0) & (s22 > 0)
        rho = np.where(pos, s12 / np.sqrt(np.where(pos, s11 * s22, 1.0)), np.nan)
    return rho, pos & np.isfinite(s12)


def _imag_ratio(z: np.ndarray) -> float:
    scale = np.abs(z.real).max()
    return float(np.abs(z.imag).max() / scale) if scale > 0 else float(np.abs(z.imag).max())


def mm_vol_coeffs(ci: FourierCoeffs, cj: FourierCoeffs, N: int, M: int) -> FourierCoeffs:
    """Volatility coefficients ``alpha_k``, ``|k| <= M``, by the Bohr convolution.

    ``alpha_k = 2*pi / (2N+1) * sum_{|s|<=N} ci(s) * cj(k - s)``
    """
    K = N + M
    for c in (ci, cj):
        if not c.covers(-K, K):
            raise ModeRangeTooNarrow(f"coefficients cover {c.k_min}..{c.k_max}, need {-K}..{K}")
    left = ci.window(-N, N)
    out = np.empty(2 * M + 1, dtype=complex)
    for idx, k in enumerate(range(-M, M + 1)):
        # cj(k - s) for s = -N..N is cj over k+N down to k-N
        out[idx] = np.dot(left, cj.window(k - N, k + N)[::-1])
    return FourierCoeffs(-M, M, out * (TWO_PI / (2 * N + 1)))


def cross_vol_coeffs(ci: FourierCoeffs, cj: FourierCoeffs, N: int, M: int) -> FourierCoeffs:
    """Volatility coefficients symmetrised in the two assets.

    For ``k != 0`` the convolution over ``|s| <= N`` differs from the one with
    the roles of ``ci`` and ``cj`` swapped (the window shifts by ``k``); their
    mean makes the spot co-volatility independent of the asset order. The two
    agree at ``k = 0`` and as ``N`` grows.
    """
    a = mm_vol_coeffs(ci, cj, N, M)
    if cj is ci:
        return a
    b = mm_vol_coeffs(cj, ci, N, M)
    return FourierCoeffs(-M, M, 0.5 * (a.values + b.values))


def fejer_inversion(alpha: FourierCoeffs, M: int, taus: np.ndarray) -> np.ndarray:
    """``sum_{|k|<=M} (1 - |k|/M) exp(i k tau) alpha_k`` at each ``tau`` (complex)."""
    k = np.arange(-M, M + 1)
    weights = (1.0 - np.abs(k) / M) * alpha.window(-M, M)
    return np.exp(1j * np.outer(taus, k)) @ weights


def _same_session(series_i: TickSeries, series_j: TickSeries) -> float:
    T = series_i.session_length
    if not math.isclose(T, series_j.session_length, rel_tol=1e-12):
        raise DataError(f"session lengths differ: {T} vs {series_j.session_length}")
    return T


def _check_aliasing(series_i: TickSeries, series_j: TickSeries, N: int, M: int):
    nyq = min(series_i.nyquist, series_j.nyquist)
    if N + M > nyq:
        logger.warning("N + M = %d exceeds the Nyquist frequency %d", N + M, nyq)


def pair_coeffs(series_i: TickSeries, series_j: TickSeries, K: int, method="fast", tolerance=1e-12):
    """Increment coefficients of both (unscaled) series on ``-K..K``."""
    _same_session(series_i, series_j)
    ci = price_coeffs(rescale_to_two_pi(series_i), K, method, tolerance)
    cj = ci if series_j is series_i else price_coeffs(rescale_to_two_pi(series_j), K, method, tolerance)
    return ci, cj


def spot_from_coeffs(ci, cj, N: int, M: int, taus: np.ndarray, T: float) -> SpotPath:
    """Spot path from precomputed coefficients, evaluated at rescaled times ``taus``."""
    entries, resid = [], 0.0
    for a, b in ((ci, ci), (cj, cj), (ci, cj)):
        z = fejer_inversion(cross_vol_coeffs(a, b, N, M), M, taus) * TWO_PI
        resid = max(resid, _imag_ratio(z))
        entries.append(z.real)
    if resid > 1e-8:
        warnings.warn(f"imaginary residual {resid:.2e} of the Fourier inversion exceeds 1e-8", stacklevel=2)
    s11, s22, s12 = entries
    rho, valid = _correlation(s11, s22, s12)
    return SpotPath(taus * (T / TWO_PI), s11, s22, s12, rho, valid, resid)


def mm_spot(
    series_i: TickSeries,
    series_j: TickSeries,
    cfg: MmConfig,
    method: str = "fast",
    tolerance: float = 1e-12,
) -> SpotPath:
    """Spot covariance matrix of two (possibly asynchronous) tick series.

    Evaluated at ``cfg.grid_points`` equispaced times covering the session;
    ``eval_times`` are reported in the series' own time unit. Times where
    either spot variance is not positive are flagged invalid.
    """
    T = _same_session(series_i, series_j)
    _check_aliasing(series_i, series_j, cfg.N, cfg.M)
    ci, cj = pair_coeffs(series_i, series_j, cfg.N + cfg.M, method, tolerance)
    taus = np.linspace(0.0, TWO_PI, cfg.grid_points)
    return spot_from_coeffs(ci, cj, cfg.N, cfg.M, taus, T)


def integrated_from_coeffs(ci: FourierCoeffs, cj: FourierCoeffs, N: int, kernel: str = "dirichlet") -> float:
    if kernel not in KERNELS:
        raise ConfigError(f"unknown kernel {kernel!r}; choose from {KERNELS}")
    if N < 1:
        raise ConfigError("N must be at least 1")
    for c in (ci, cj):
        if not c.covers(-N, N):
            raise ModeRangeTooNarrow(f"coefficients cover {c.k_min}..{c.k_max}, need {-N}..{N}")
    # alpha_0 = sum_s ci(s) cj(-s)
    prod = ci.window(-N, N) * cj.window(-N, N)[::-1]
    if kernel == "dirichlet":
        a0 = prod.sum() * (TWO_PI / (2 * N + 1))
    else:
        s = np.arange(-N, N + 1)
        a0 = np.dot(1.0 - np.abs(s) / N, prod) * (TWO_PI / N)
    a0 *= TWO_PI
    if abs(a0.imag) > 1e-8 * max(abs(a0.real), 1e-300):
        warnings.warn(f"integrated estimate has imaginary part {a0.imag:.2e}", stacklevel=2)
    return float(a0.real)


def mm_integrated(
    series_i: TickSeries,
    series_j: TickSeries,
    N: int,
    kernel: str = "dirichlet",
    method: str = "fast",
    tolerance: float = 1e-12,
) -> float:
    """Integrated (co)variance over the session, ``2*pi * alpha_0``.

    The Dirichlet kernel weights the modes ``|s| <= N`` equally; the Fejer
    kernel weights them by ``1 - |s|/N``.
    """
    ci, cj = pair_coeffs(series_i, series_j, N, method, tolerance)
    return integrated_from_coeffs(ci, cj, N, kernel)


def integrated_correlation(series_i, series_j, N, kernel="dirichlet", method="fast", tolerance=1e-12) -> float:
    ci, cj = pair_coeffs(series_i, series_j, N, method, tolerance)
    return _corr_from(ci, cj, N, kernel)


def _corr_from(ci, cj, N, kernel) -> float:
    v11 = integrated_from_coeffs(ci, ci, N, kernel)
    v22 = integrated_from_coeffs(cj, cj, N, kernel)
    if not (v11 > 0 and v22 > 0):
        return math.nan
    return integrated_from_coeffs(ci, cj, N, kernel) / math.sqrt(v11 * v22)
