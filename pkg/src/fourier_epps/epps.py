"""Epps curves, saturation time-scale selection and spot-correlation surfaces."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .ct import CtConfig, ct_v_range, _variance_from_v, ct_spot_covariance, summed_grid
from .data import TWO_PI, TickSeries, common_start, previous_tick
from .errors import ConfigError, DataError, DegenerateEstimate, NoSaturation
from .mm import (
    _correlation,
    _corr_from,
    _same_session,
    cross_vol_coeffs,
    fejer_inversion,
    n_from_dt,
    pair_coeffs,
    spot_from_coeffs,
)

logger = logging.getLogger(__name__)

ESTIMATORS = ("mm", "ct")


@dataclass
class EppsCurve:
    dts: np.ndarray
    rhos: np.ndarray
    Ns: np.ndarray

    def __post_init__(self):
        self.dts = np.asarray(self.dts, dtype=float)
        self.rhos = np.asarray(self.rhos, dtype=float)
        self.Ns = np.asarray(self.Ns, dtype=np.int64)
        if not (self.dts.shape == self.rhos.shape == self.Ns.shape):
            raise DataError("dts, rhos and Ns must have equal lengths")
        if np.any(np.diff(self.dts) <= 0):
            raise DataError("dts must be strictly increasing")
        finite = self.rhos[np.isfinite(self.rhos)]
        if np.any(np.abs(finite) > 1.5):
            logger.warning("Epps curve has correlations outside [-1.5, 1.5]")


@dataclass
class Surface:
    """Spot correlations indexed by (Δt or M) x evaluation time. NaN marks invalid cells."""

    axis1: np.ndarray
    axis2: np.ndarray
    values: np.ndarray
    kind: str  # "dt" or "M"

    def __post_init__(self):
        if self.values.shape != (len(self.axis1), len(self.axis2)):
            raise DataError("surface matrix does not match its axes")


def _check_dts(dts: Sequence[float], T: float) -> np.ndarray:
    dts = np.asarray(dts, dtype=float)
    if dts.ndim != 1 or dts.size == 0:
        raise ConfigError("dts must be a non-empty list")
    if np.any(np.diff(dts) <= 0):
        raise ConfigError("dts must be strictly increasing")
    if dts[0] <= 0 or dts[-1] > T:
        raise ConfigError(f"dts must lie in (0, T={T}]")
    return dts


def _map(fn: Callable, items, threads: int = 1) -> list:
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def epps_curve(
    series_i: TickSeries,
    series_j: TickSeries,
    dts: Sequence[float],
    kernel: str = "dirichlet",
    method: str = "fast",
) -> EppsCurve:
    """Integrated MM correlation against the sampling interval.

    Each Δt is converted to a cutting frequency with :func:`n_from_dt`; the
    price coefficients are computed once for the largest ``N`` and shared.
    Entries with ``N < 1`` or a non-positive variance are NaN.
    """
    T = _same_session(series_i, series_j)
    dts = _check_dts(dts, T)
    Ns = np.array([n_from_dt(dt, T) for dt in dts])
    K = max(int(Ns.max()), 1)
    ci, cj = pair_coeffs(series_i, series_j, K, method)
    rhos = np.array([_corr_from(ci, cj, int(N), kernel) if N >= 1 else math.nan for N in Ns])
    return EppsCurve(dts, rhos, Ns)


def saturation_dt(curve: EppsCurve, band: float = 0.05, tail_fraction: float = 0.25) -> float:
    """Smallest Δt from which the curve stays within ``band`` of its plateau.

    The plateau is the mean correlation over the last ``tail_fraction`` of
    the sampled intervals.

    Raises
    ------
    NoSaturation
        If even the largest Δt lies outside the band.
    """
    if len(curve.dts) < 8:
        raise ConfigError("saturation detection needs at least 8 curve points")
    if not 0 < tail_fraction < 1:
        raise ConfigError("tail_fraction must lie in (0, 1)")
    if not band > 0:
        raise ConfigError("band must be positive")
    n_tail = max(1, math.ceil(tail_fraction * len(curve.dts)))
    tail = curve.rhos[-n_tail:]
    if not np.all(np.isfinite(tail)):
        raise NoSaturation("plateau region contains undefined correlations")
    plateau = tail.mean()
    inside = np.abs(curve.rhos - plateau) <= band  # NaN compares False
    outside = np.flatnonzero(~inside)
    if outside.size == 0:
        return float(curve.dts[0])
    last = outside[-1]
    if last == len(curve.dts) - 1:
        raise NoSaturation("the Epps curve is outside the band at the largest Δt")
    return float(curve.dts[last + 1])


def _default_times(T: float, t0: float, grid_points: int) -> np.ndarray:
    return np.linspace(t0, T, grid_points)


def _nan_row(n):
    return np.full(n, np.nan)


def _masked_rho(path) -> np.ndarray:
    return np.where(path.valid, path.rho, np.nan)


def surface_dt(
    series_i: TickSeries,
    series_j: TickSeries,
    dts: Sequence[float],
    M: int,
    estimator: str = "mm",
    grid_points: int = 1000,
    threads: int = 1,
) -> Surface:
    """Spot correlation rows for a sweep of sampling intervals at fixed ``M``.

    MM rows use ``N = n_from_dt(Δt)`` on the raw ticks and are evaluated on
    ``[0, T]``; CT rows apply previous-tick interpolation at Δt from the first
    joint trade and are evaluated on ``[t0, T]``.
    """
    if estimator not in ESTIMATORS:
        raise ConfigError(f"unknown estimator {estimator!r}")
    T = _same_session(series_i, series_j)
    dts = _check_dts(dts, T)

    if estimator == "mm":
        times = _default_times(T, 0.0, grid_points)
        taus = times * (TWO_PI / T)
        Ns = [n_from_dt(dt, T) for dt in dts]
        ci, cj = pair_coeffs(series_i, series_j, max(Ns) + M)

        def row(N):
            if M > N:
                logger.warning("skipping N=%d: M=%d exceeds N", N, M)
                return _nan_row(grid_points)
            return _masked_rho(spot_from_coeffs(ci, cj, N, M, taus, T))

        rows = _map(row, Ns, threads)
    else:
        t0 = common_start(series_i, series_j)
        times = _default_times(T, t0, grid_points)
        cfg = CtConfig(M, grid_points)

        def row(dt):
            try:
                g1 = previous_tick(series_i, dt, t0, T)
                g2 = previous_tick(series_j, dt, t0, T)
                return _masked_rho(ct_spot_covariance(g1, g2, cfg, times))
            except (DegenerateEstimate, ConfigError) as exc:
                logger.warning("Δt=%g: %s", dt, exc)
                return _nan_row(grid_points)

        rows = _map(row, dts, threads)
    return Surface(dts, times, np.vstack(rows), "dt")


def surface_m(
    series_i: TickSeries,
    series_j: TickSeries,
    dt: float,
    Ms: Sequence[int],
    estimator: str = "mm",
    grid_points: int = 1000,
    threads: int = 1,
) -> Surface:
    """Spot correlation rows for a sweep of reconstruction frequencies at fixed Δt."""
    if estimator not in ESTIMATORS:
        raise ConfigError(f"unknown estimator {estimator!r}")
    Ms = np.asarray(Ms, dtype=np.int64)
    if Ms.size == 0 or Ms.min() < 1:
        raise ConfigError("Ms must be positive integers")
    T = _same_session(series_i, series_j)
    m_max = int(Ms.max())

    if estimator == "mm":
        N = n_from_dt(dt, T)
        if m_max > N:
            raise ConfigError(f"M={m_max} exceeds N={N}")
        if m_max > N / 2:
            logger.warning("M up to %d exceeds N/2 = %g: rows may alias", m_max, N / 2)
        times = _default_times(T, 0.0, grid_points)
        taus = times * (TWO_PI / T)
        ci, cj = pair_coeffs(series_i, series_j, N + m_max)
        # alpha_k does not depend on M, so build it once for the largest M
        alphas = [cross_vol_coeffs(a, b, N, m_max) for a, b in ((ci, ci), (cj, cj), (ci, cj))]

        def row(M):
            s11, s22, s12 = (fejer_inversion(al, int(M), taus).real * TWO_PI for al in alphas)
            rho, valid = _correlation(s11, s22, s12)
            return np.where(valid, rho, np.nan)
    else:
        t0 = common_start(series_i, series_j)
        times = _default_times(T, t0, grid_points)
        g1 = previous_tick(series_i, dt, t0, T)
        g2 = previous_tick(series_j, dt, t0, T)
        CtConfig(m_max).check(g1)
        grids = (g1, g2, summed_grid(g1, g2))
        vs = [ct_v_range(g, m_max) for g in grids]

        def row(M):
            (s11, v1, _), (s22, v2, _), (ssum, v3, _) = (
                _variance_from_v(g, v, int(M), times) for g, v in zip(grids, vs)
            )
            rho, ok = _correlation(s11, s22, 0.5 * (ssum - s11 - s22))
            return np.where(v1 & v2 & v3 & ok, rho, np.nan)

    return Surface(Ms.astype(float), times, np.vstack(_map(row, Ms, threads)), "M")
