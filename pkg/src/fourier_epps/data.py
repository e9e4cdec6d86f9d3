"""Tick containers, previous-tick synchronisation and TAQ ingestion."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from itertools import groupby
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import BadPrice, DataError, InsufficientData, NoPriorObservation, ZeroVolumeGroup

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class TickSeries:
    """Irregularly timed log-prices of a single asset.

    Attributes
    ----------
    times : ndarray
        Observation times measured from the session open, strictly increasing.
    log_prices : ndarray
        ``ln(P)`` at each observation time.
    session_length : float
        Length of the session ``T`` in the same unit as ``times``.
    """

    times: np.ndarray
    log_prices: np.ndarray
    session_length: float

    def __post_init__(self):
        times = np.ascontiguousarray(self.times, dtype=float)
        values = np.ascontiguousarray(self.log_prices, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "log_prices", values)
        object.__setattr__(self, "session_length", float(self.session_length))
        if times.ndim != 1 or times.shape != values.shape:
            raise DataError("times and log_prices must be 1-d arrays of equal length")
        if times.size < 2:
            raise InsufficientData(f"a tick series needs at least 2 observations, got {times.size}")
        if not self.session_length > 0:
            raise DataError("session_length must be positive")
        if np.any(np.diff(times) <= 0):
            raise DataError("times must be strictly increasing")
        if times[0] < 0 or times[-1] > self.session_length:
            raise DataError(
                f"times must lie in [0, {self.session_length}], got [{times[0]}, {times[-1]}]"
            )
        if not np.all(np.isfinite(values)):
            raise DataError("log_prices must be finite")

    def __len__(self):
        return self.times.size

    @property
    def increments(self) -> np.ndarray:
        return np.diff(self.log_prices)

    @property
    def nyquist(self) -> int:
        """Largest alias-free Fourier mode, ``floor(n / 2)``."""
        return len(self) // 2


@dataclass(frozen=True)
class UniformGrid:
    """Log-prices on the equispaced grid ``t0 + h * dt``, ``h = 0..H``.

    ``session_length`` is the length of the session the grid was cut from;
    ``None`` means the grid spans exactly one session.
    """

    t0: float
    dt: float
    values: np.ndarray
    session_length: float | None = None

    def __post_init__(self):
        values = np.ascontiguousarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or values.size < 2:
            raise InsufficientData("a uniform grid needs at least 2 values")
        if not self.dt > 0:
            raise DataError("dt must be positive")
        if not np.all(np.isfinite(values)):
            raise DataError("grid values must be finite")
        if self.session_length is not None and self.span > self.session_length * (1 + 1e-12):
            raise DataError("grid span exceeds the session length")

    @property
    def n_increments(self) -> int:
        return self.values.size - 1

    @property
    def span(self) -> float:
        return self.n_increments * self.dt

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.values.size)

    @property
    def span_in_sessions(self) -> float:
        """Grid span measured in session units (1.0 when it covers the session)."""
        if self.session_length is None:
            return 1.0
        return self.span / self.session_length

    def to_series(self) -> TickSeries:
        session = self.session_length if self.session_length is not None else self.t0 + self.span
        return TickSeries(self.times, self.values, max(session, self.t0 + self.span))


@dataclass(frozen=True)
class TaqRecord:
    timestamp: float
    price: float
    volume: float = 0.0


def previous_tick(series: TickSeries, dt: float, t0: float = 0.0, t_end: float | None = None) -> UniformGrid:
    """Carry the last observed log-price forward onto a grid of width ``dt``.

    The grid covers ``t0, t0 + dt, ...`` up to the largest point not after
    ``t_end`` (default: the session end). Ticks after ``t_end`` are dropped.

    Raises
    ------
    NoPriorObservation
        If ``t0`` precedes the first tick.
    """
    if not dt > 0:
        raise DataError("dt must be positive")
    if t_end is None:
        t_end = series.session_length
    if t_end < t0:
        raise DataError("t_end must not precede t0")
    if t0 < series.times[0]:
        raise NoPriorObservation(f"no observation at or before t0={t0} (first tick at {series.times[0]})")
    # guard so that t_end landing exactly on a grid point survives roundoff
    n_steps = int(math.floor((t_end - t0) / dt * (1 + 1e-12) + 1e-12))
    grid_times = t0 + dt * np.arange(n_steps + 1)
    idx = np.searchsorted(series.times, grid_times, side="right") - 1
    return UniformGrid(t0, dt, series.log_prices[idx], series.session_length)


def rescale_to_two_pi(series: TickSeries) -> TickSeries:
    """Map the session ``[0, T]`` linearly onto ``[0, 2*pi]``."""
    scale = TWO_PI / series.session_length
    times = np.minimum(series.times * scale, TWO_PI)
    return TickSeries(times, series.log_prices, TWO_PI)


def common_start(series_i: TickSeries, series_j: TickSeries) -> float:
    """First time at which both assets have traded."""
    return float(max(series_i.times[0], series_j.times[0]))


def ingest_taq(
    records: Iterable[TaqRecord],
    session_open: float = 0.0,
    session_length: float | None = None,
) -> TickSeries:
    """Build a tick series from raw trades.

    Trades sharing a timestamp collapse into one tick priced at their volume
    weighted average; the log is taken after aggregation. Times are shifted
    so that ``session_open`` maps to zero. Trades outside the session are
    dropped. A zero volume is accepted for a trade that is alone at its
    timestamp.
    """
    recs = sorted(records, key=lambda r: r.timestamp)
    times, prices = [], []
    for ts, group in groupby(recs, key=lambda r: r.timestamp):
        group = list(group)
        for r in group:
            if not (r.price > 0 and math.isfinite(r.price)):
                raise BadPrice(f"non-positive price {r.price} at t={ts}")
            if r.volume < 0:
                raise DataError(f"negative volume {r.volume} at t={ts}")
        if len(group) == 1:
            price = group[0].price
        else:
            vol = math.fsum(r.volume for r in group)
            if vol <= 0:
                raise ZeroVolumeGroup(f"{len(group)} trades at t={ts} carry zero total volume")
            price = math.fsum(r.price * r.volume for r in group) / vol
        times.append(float(ts) - session_open)
        prices.append(price)

    times = np.asarray(times, dtype=float)
    prices = np.asarray(prices, dtype=float)
    if session_length is None:
        session_length = float(times[-1]) if times.size else 0.0
    keep = (times >= 0) & (times <= session_length)
    if not keep.all():
        logger.info("dropped %d trades outside the session", int((~keep).sum()))
    return TickSeries(times[keep], np.log(prices[keep]), session_length)


def read_taq_csv(path: str | Path) -> list[TaqRecord]:
    """Read a ``time,price,volume`` CSV."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = {"time", "price", "volume"} - set(reader.fieldnames or ())
        if missing:
            raise DataError(f"{path}: missing columns {sorted(missing)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                out.append(TaqRecord(float(row["time"]), float(row["price"]), float(row["volume"])))
            except (TypeError, ValueError) as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
    return out


def write_ticks_csv(series: TickSeries, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "x"])
        for t, x in zip(series.times, series.log_prices):
            w.writerow([repr(float(t)), repr(float(x))])


def read_ticks_csv(path: str | Path, session_length: float | None = None) -> TickSeries:
    """Read a ``t,x`` tick CSV. Session length defaults to the last tick time."""
    ts, xs = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if not {"t", "x"} <= set(reader.fieldnames or ()):
            raise DataError(f"{path}: expected columns t,x")
        for lineno, row in enumerate(reader, start=2):
            try:
                ts.append(float(row["t"]))
                xs.append(float(row["x"]))
            except (TypeError, ValueError) as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
    if not ts:
        raise InsufficientData(f"{path}: no ticks")
    if session_length is None:
        session_length = ts[-1]
    return TickSeries(np.array(ts), np.array(xs), session_length)

