"""Cuchiero-Teichmann spot estimation with ``g(x) = cos(x)``.

On an equidistant grid of ``H`` increments spanning ``T`` sessions
(``n = H / T`` increments per session) the V-statistic

    V(k) = 1/n * sum_{h=1..H} exp(-2i pi k (h-1) / H) * cos(sqrt(n) * dX_h)

estimates the Fourier coefficients of ``exp(-Sigma / 2)``. A Fejer
inversion followed by ``-2 log`` gives the spot variance; the covariance
follows from the polarisation identity applied to ``X1 + X2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft

from .data import UniformGrid
from .errors import ConfigError, DegenerateEstimate, GridMismatch
from .mm import SpotPath, _correlation


@dataclass(frozen=True)
class CtConfig:
    """Reconstruction frequency ``M`` and evaluation grid size.

    The grid density ``n`` and the span ``T`` (in sessions) are read off the
    grid itself; ``M`` must not exceed the grid's Nyquist frequency.
    """

    M: int
    grid_points: int = 1000

    def __post_init__(self):
        if self.M < 1:
            raise ConfigError(f"M must be a positive integer, got {self.M}")
        if self.grid_points < 2:
            raise ConfigError("grid_points must be at least 2")

    def check(self, grid: UniformGrid):
        if self.M > grid.n_increments // 2:
            raise ConfigError(f"M={self.M} exceeds the grid Nyquist frequency {grid.n_increments // 2}")


def _density(grid: UniformGrid) -> tuple[float, float]:
    T = grid.span_in_sessions
    return grid.n_increments / T, T


def _g_values(grid: UniformGrid) -> tuple[np.ndarray, float, float]:
    n, T = _density(grid)
    return np.cos(math.sqrt(n) * np.diff(grid.values)), n, T


def ct_v_statistic(grid: UniformGrid, k: int) -> complex:
    """V-statistic of mode ``k`` by direct summation."""
    g, n, _ = _g_values(grid)
    H = g.size
    phase = np.exp(-2j * np.pi * k * np.arange(H) / H)
    return complex(np.dot(phase, g) / n)


def ct_v_range(grid: UniformGrid, M: int) -> np.ndarray:
    """V-statistics for ``k = -M..M`` (one FFT of the cosine terms)."""
    g, n, _ = _g_values(grid)
    spec = scipy.fft.fft(g)
    return spec[np.mod(np.arange(-M, M + 1), g.size)] / n


def _fejer_rho_g(grid: UniformGrid, v: np.ndarray, M: int, eval_times: np.ndarray) -> np.ndarray:
    _, T = _density(grid)
    k = np.arange(-M, M + 1)
    weights = (1.0 - np.abs(k) / M) * v[len(v) // 2 - M: len(v) // 2 + M + 1]
    u = (eval_times - grid.t0) / grid.span  # fraction of the grid span; periodic outside [0, 1]
    return np.exp(2j * np.pi * np.outer(u, k)) @ weights / T


def _eval_times(grid: UniformGrid, cfg: CtConfig, eval_times) -> np.ndarray:
    if eval_times is None:
        return grid.t0 + np.linspace(0.0, grid.span, cfg.grid_points)
    return np.asarray(eval_times, dtype=float)


def _variance_from_v(grid, v, M, times):
    z = _fejer_rho_g(grid, v, M, times)
    scale = np.abs(z.real).max()
    resid = float(np.abs(z.imag).max() / scale) if scale > 0 else 0.0
    rho_g = z.real
    valid = rho_g > 0
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where(valid, -2.0 * np.log(np.where(valid, rho_g, 1.0)), np.nan)
    return s, valid, resid


def ct_spot_variance(grid: UniformGrid, cfg: CtConfig, eval_times=None) -> SpotPath:
    """Spot variance of one gridded log-price series (variance per session).

    Times where the reconstructed ``exp(-Sigma/2)`` is not positive are
    flagged invalid.

    Raises
    ------
    DegenerateEstimate
        If no evaluation time is valid.
    """
    cfg.check(grid)
    times = _eval_times(grid, cfg, eval_times)
    s, valid, resid = _variance_from_v(grid, ct_v_range(grid, cfg.M), cfg.M, times)
    if not valid.any():
        raise DegenerateEstimate("reconstructed exp(-Sigma/2) is non-positive everywhere")
    return SpotPath(times, s, valid=valid, imag_residual=resid)


def summed_grid(grid1: UniformGrid, grid2: UniformGrid) -> UniformGrid:
    _check_aligned(grid1, grid2)
    return UniformGrid(grid1.t0, grid1.dt, grid1.values + grid2.values, grid1.session_length)


def _check_aligned(grid1: UniformGrid, grid2: UniformGrid):
    if (
        grid1.values.size != grid2.values.size
        or not math.isclose(grid1.t0, grid2.t0, rel_tol=0, abs_tol=1e-12 * max(1.0, abs(grid1.t0)))
        or not math.isclose(grid1.dt, grid2.dt, rel_tol=1e-12)
        or grid1.session_length != grid2.session_length
    ):
        raise GridMismatch("grids must share t0, dt, length and session length")


def ct_spot_covariance(grid1: UniformGrid, grid2: UniformGrid, cfg: CtConfig, eval_times=None) -> SpotPath:
    """Spot covariance matrix of two aligned grids via polarisation.

    ``s12 = (-2 log rho_g[X1 + X2] - s11 - s22) / 2``. A time is invalid as
    soon as any of the three univariate reconstructions is; ``rho`` is NaN
    wherever ``s11 * s22`` is not positive.
    """
    _check_aligned(grid1, grid2)
    cfg.check(grid1)
    times = _eval_times(grid1, cfg, eval_times)
    parts = [
        _variance_from_v(g, ct_v_range(g, cfg.M), cfg.M, times)
        for g in (grid1, grid2, summed_grid(grid1, grid2))
    ]
    (s11, v1, r1), (s22, v2, r2), (ssum, v3, r3) = parts
    s12 = 0.5 * (ssum - s11 - s22)
    rho, _ = _correlation(s11, s22, s12)
    # validity follows the three reconstructions; rho is NaN where a variance is not positive
    valid = v1 & v2 & v3
    if not valid.any():
        raise DegenerateEstimate("no evaluation time has a valid CT covariance estimate")
    return SpotPath(times, s11, s22, s12, rho, valid, max(r1, r2, r3))
