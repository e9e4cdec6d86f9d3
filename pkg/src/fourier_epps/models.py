"""Bivariate price simulators and Poissonian asynchronous sampling.

All simulators step on ``n`` equal increments of ``[0, T]`` (so a path has
``n + 1`` points) and draw every noise source from its own child of
``SeedSequence(seed)``. Switching a jump source off therefore leaves the
Brownian draws untouched, which is what makes Merton/Bates with zero rates
reproduce GBM/Heston bit for bit.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .data import TickSeries, UniformGrid
from .errors import ConfigError, TooSparse

logger = logging.getLogger(__name__)

# child-stream indices of SeedSequence(seed).spawn(_N_STREAMS)
_W, _B, _PRICE_JUMP_COUNT, _PRICE_JUMP_SIZE, _VOL_JUMP_COUNT, _VOL_JUMP_SIZE = range(6)
_N_STREAMS = 6

DEFAULT_X0 = (4.6, 4.6)


def _streams(seed: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(_N_STREAMS)]


def _pair(value, name) -> np.ndarray:
    arr = np.asarray(value, dtype=float).reshape(-1)
    if arr.shape != (2,):
        raise ConfigError(f"{name} must be a pair, got {value!r}")
    return arr


def _psd(mat: np.ndarray, tol: float = 1e-12) -> bool:
    return bool(np.linalg.eigvalsh(0.5 * (mat + mat.T)).min() >= -tol)


@dataclass(frozen=True)
class GbmParams:
    mu: tuple = (0.01, 0.01)
    sigma_sq: tuple = (0.1, 0.2)
    rho12: float = 0.35
    x0: tuple = DEFAULT_X0

    def __post_init__(self):
        mu, s2, x0 = _pair(self.mu, "mu"), _pair(self.sigma_sq, "sigma_sq"), _pair(self.x0, "x0")
        if np.any(s2 < 0):
            raise ConfigError("sigma_sq components must be non-negative")
        if abs(self.rho12) > 1:
            raise ConfigError("rho12 must lie in [-1, 1]")
        object.__setattr__(self, "mu", tuple(mu))
        object.__setattr__(self, "sigma_sq", tuple(s2))
        object.__setattr__(self, "x0", tuple(x0))


@dataclass(frozen=True)
class MertonParams:
    gbm: GbmParams = field(default_factory=GbmParams)
    jump_mean: tuple = (-0.005, -0.003)
    jump_sd: tuple = (0.015, 0.02)
    jump_rate: tuple = (100.0, 100.0)

    def __post_init__(self):
        a, b, lam = _pair(self.jump_mean, "a"), _pair(self.jump_sd, "b"), _pair(self.jump_rate, "lambda")
        if np.any(b <= 0):
            raise ConfigError("jump_sd components must be positive")
        if np.any(lam < 0):
            raise ConfigError("jump_rate components must be non-negative")
        object.__setattr__(self, "jump_mean", tuple(a))
        object.__setattr__(self, "jump_sd", tuple(b))
        object.__setattr__(self, "jump_rate", tuple(lam))


_TABLE2_ALPHA = np.array([[0.0725, 0.06], [0.06, 0.1325]])


def _sym_sqrt(mat: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(0.5 * (mat + mat.T))
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.T


@dataclass(frozen=True)
class WishartHestonParams:
    """Parameters of the matrix-valued (Wishart) Heston model.

    ``mean_reversion_M`` is the drift matrix of the variance process, not a
    reconstruction frequency. ``H`` is the symmetric square root of the
    ``alpha`` matrix of the parameter table.
    """

    x0: tuple = DEFAULT_X0
    sigma0: np.ndarray = field(default_factory=lambda: np.array([[0.09, -0.036], [-0.036, 0.09]]))
    mean_reversion_M: np.ndarray = field(default_factory=lambda: np.array([[-1.6, -0.2], [-0.4, -1.0]]))
    H: np.ndarray = field(default_factory=lambda: _sym_sqrt(_TABLE2_ALPHA))
    b_matrix: np.ndarray = field(default_factory=lambda: 3.5 * _TABLE2_ALPHA)
    leverage_rho: tuple = (-0.3, -0.5)

    def __post_init__(self):
        object.__setattr__(self, "x0", tuple(_pair(self.x0, "x0")))
        for name in ("sigma0", "mean_reversion_M", "H", "b_matrix"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (2, 2):
                raise ConfigError(f"{name} must be a 2x2 matrix")
            object.__setattr__(self, name, arr)
        rho = _pair(self.leverage_rho, "rho")
        object.__setattr__(self, "leverage_rho", tuple(rho))
        if not np.allclose(self.sigma0, self.sigma0.T) or not _psd(self.sigma0):
            raise ConfigError("sigma0 must be symmetric positive semi-definite")
        if not _psd(self.b_matrix - self.H @ self.H):
            raise ConfigError("b - H^2 must be positive semi-definite")
        if rho @ rho > 1:
            raise ConfigError("leverage rho must satisfy rho' rho <= 1")

    @classmethod
    def from_alpha(cls, alpha, b_factor: float = 3.5, **kw) -> "WishartHestonParams":
        alpha = np.asarray(alpha, dtype=float)
        return cls(H=_sym_sqrt(alpha), b_matrix=kw.pop("b_matrix", b_factor * alpha), **kw)

    def long_run_mean(self) -> np.ndarray:
        """Stationary mean solving ``b + M S + S M' = 0``."""
        from scipy.linalg import solve_continuous_lyapunov

        return solve_continuous_lyapunov(self.mean_reversion_M, -self.b_matrix)


@dataclass(frozen=True)
class BatesParams:
    heston: WishartHestonParams = field(default_factory=WishartHestonParams)
    price_jump_rate: tuple = (100.0, 100.0)
    price_jump_mean: tuple = (-0.005, -0.003)
    price_jump_sd: tuple = (0.015, 0.02)
    vol_jump_rate: float = 10.0
    vol_jump_scale: float = 0.05

    def __post_init__(self):
        lam, a, b = (
            _pair(self.price_jump_rate, "lambdaX"),
            _pair(self.price_jump_mean, "a"),
            _pair(self.price_jump_sd, "b"),
        )
        if np.any(lam < 0) or self.vol_jump_rate < 0:
            raise ConfigError("jump rates must be non-negative")
        if np.any(b <= 0):
            raise ConfigError("price_jump_sd must be positive")
        if not self.vol_jump_scale > 0:
            raise ConfigError("theta must be positive")
        object.__setattr__(self, "price_jump_rate", tuple(lam))
        object.__setattr__(self, "price_jump_mean", tuple(a))
        object.__setattr__(self, "price_jump_sd", tuple(b))


@dataclass(frozen=True)
class SinCorrParams:
    sigma_sq: tuple = (0.1, 0.2)
    x0: tuple = DEFAULT_X0

    def __post_init__(self):
        s2 = _pair(self.sigma_sq, "sigma_sq")
        if np.any(s2 < 0):
            raise ConfigError("sigma_sq components must be non-negative")
        object.__setattr__(self, "sigma_sq", tuple(s2))
        object.__setattr__(self, "x0", tuple(_pair(self.x0, "x0")))


@dataclass
class SimPath:
    """A simulated bivariate path on ``n + 1`` equispaced points of ``[0, T]``.

    ``true_sigma`` has columns ``(s11, s22, s12)`` per time point and is in
    variance per unit ``T``. ``info`` carries diagnostics such as jump counts.
    """

    times: np.ndarray
    log_prices: np.ndarray
    true_sigma: np.ndarray | None
    T: float
    info: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.times.size - 1

    def series(self, asset: int) -> TickSeries:
        return TickSeries(self.times, self.log_prices[asset], self.T)

    def grid(self, asset: int) -> UniformGrid:
        return UniformGrid(0.0, self.T / self.n, self.log_prices[asset], self.T)

    def true_rho(self) -> np.ndarray:
        s11, s22, s12 = self.true_sigma.T
        with np.errstate(invalid="ignore", divide="ignore"):
            return s12 / np.sqrt(s11 * s22)


def _check_n(n: int, T: float):
    if n < 2:
        raise ConfigError("n must be at least 2")
    if not T > 0:
        raise ConfigError("T must be positive")


def _correlated_normals(rng: np.random.Generator, n: int, rho: np.ndarray | float) -> np.ndarray:
    z = rng.standard_normal((n, 2))
    rho = np.asarray(rho, dtype=float)
    eps2 = rho * z[:, 0] + np.sqrt(1.0 - rho**2) * z[:, 1]
    return np.column_stack([z[:, 0], eps2])


def _prepend_cumsum(x0, increments: np.ndarray) -> np.ndarray:
    path = np.empty((2, increments.shape[0] + 1))
    path[:, 0] = x0
    path[:, 1:] = np.asarray(x0)[:, None] + np.cumsum(increments.T, axis=1)
    return path


def _gbm_increments(params: GbmParams, n: int, T: float, rngs) -> np.ndarray:
    dt = T / n
    mu, s2 = np.array(params.mu), np.array(params.sigma_sq)
    eps = _correlated_normals(rngs[_W], n, params.rho12)
    return (mu - 0.5 * s2) * dt + np.sqrt(s2 * dt) * eps


def _constant_sigma(s2, rho, n) -> np.ndarray:
    s12 = rho * math.sqrt(s2[0] * s2[1])
    return np.tile([s2[0], s2[1], s12], (n + 1, 1))


def simulate_gbm(params: GbmParams, n: int, T: float = 1.0, seed: int = 0) -> SimPath:
    """Exact log-Euler simulation of a bivariate geometric Brownian motion."""
    _check_n(n, T)
    inc = _gbm_increments(params, n, T, _streams(seed))
    return SimPath(
        np.linspace(0.0, T, n + 1),
        _prepend_cumsum(params.x0, inc),
        _constant_sigma(params.sigma_sq, params.rho12, n),
        T,
    )


def _gaussian_compound_jumps(count_rng, size_rng, rate, mean, sd, n, dt):
    """Per-step sum of a Poisson number of N(mean, sd^2) jumps."""
    counts = count_rng.poisson(np.asarray(rate) * dt, size=(n, 2))
    z = size_rng.standard_normal((n, 2))
    return counts, counts * np.asarray(mean) + np.sqrt(counts) * np.asarray(sd) * z


def simulate_merton(params: MertonParams, n: int, T: float = 1.0, seed: int = 0) -> SimPath:
    """GBM plus compound-Poisson log-normal jumps.

    A jump with multiplicative size ``Y ~ LN(a, b)`` adds ``ln Y ~ N(a, b^2)``
    to the log-price. ``true_sigma`` is the continuous part only.
    """
    _check_n(n, T)
    rngs = _streams(seed)
    inc = _gbm_increments(params.gbm, n, T, rngs)
    counts, jumps = _gaussian_compound_jumps(
        rngs[_PRICE_JUMP_COUNT], rngs[_PRICE_JUMP_SIZE],
        params.jump_rate, params.jump_mean, params.jump_sd, n, T / n,
    )
    return SimPath(
        np.linspace(0.0, T, n + 1),
        _prepend_cumsum(params.gbm.x0, inc + jumps),
        _constant_sigma(params.gbm.sigma_sq, params.gbm.rho12, n),
        T,
        {"price_jump_counts": counts},
    )


def _sqrt_psd_2x2(a: float, c: float, d: float):
    """Square root of [[a, c], [c, d]] with negative eigenvalues clipped.

    Returns the root entries ``(r11, r12, r22)`` and the smaller eigenvalue.
    """
    m = 0.5 * (a + d)
    h = 0.5 * (a - d)
    r = math.hypot(h, c)
    lo, hi = m - r, m + r
    if r == 0.0:
        s = math.sqrt(max(m, 0.0))
        return s, 0.0, s, lo
    # unit eigenvector of the larger eigenvalue: (cos th, sin th), th = atan2(c, h) / 2
    cos2, sin2 = h / r, c / r
    cc = 0.5 * (1.0 + cos2)  # cos^2 th
    ss = 0.5 * (1.0 - cos2)  # sin^2 th
    cs = 0.5 * sin2          # cos th sin th
    sh, sl = math.sqrt(max(hi, 0.0)), math.sqrt(max(lo, 0.0))
    return sh * cc + sl * ss, (sh - sl) * cs, sh * ss + sl * cc, lo


def _wishart_path(
    p: WishartHestonParams,
    n: int,
    T: float,
    rngs,
    price_jumps: np.ndarray,
    vol_jumps: np.ndarray,
    compensator: np.ndarray,
):
    dt = T / n
    sdt = math.sqrt(dt)
    dW = (rngs[_W].standard_normal((n, 2)) * sdt).tolist()
    dB = (rngs[_B].standard_normal((n, 2, 2)) * sdt).tolist()
    pj = price_jumps.tolist()
    vj = vol_jumps.tolist()
    (m11, m12), (m21, m22) = p.mean_reversion_M.tolist()
    (h11, h12), (h21, h22) = p.H.tolist()
    (b11, b12), (_, b22) = p.b_matrix.tolist()
    r1, r2 = p.leverage_rho
    w_scale = math.sqrt(max(1.0 - r1 * r1 - r2 * r2, 0.0))
    c1, c2 = compensator.tolist()

    s11, s12, s22 = float(p.sigma0[0, 0]), float(p.sigma0[0, 1]), float(p.sigma0[1, 1])
    x1, x2 = p.x0
    xs = np.empty((2, n + 1))
    sig = np.empty((n + 1, 3))
    xs[:, 0] = x1, x2
    sig[0] = s11, s22, s12
    q11, q12, q22, lo = _sqrt_psd_2x2(s11, s12, s22)
    projections = 0

    for h in range(n):
        (db11, db12), (db21, db22) = dB[h]
        dw1, dw2 = dW[h]
        # dZ = sqrt(1 - rho'rho) dW + dB rho
        dz1 = w_scale * dw1 + db11 * r1 + db12 * r2
        dz2 = w_scale * dw2 + db21 * r1 + db22 * r2
        j1, j2 = pj[h]
        x1 += (-0.5 * s11 - c1) * dt + q11 * dz1 + q12 * dz2 + j1
        x2 += (-0.5 * s22 - c2) * dt + q12 * dz1 + q22 * dz2 + j2

        # drift b + M S + S M'
        ms11 = m11 * s11 + m12 * s12
        ms12 = m11 * s12 + m12 * s22
        ms21 = m21 * s11 + m22 * s12
        ms22 = m21 * s12 + m22 * s22
        d11 = b11 + 2.0 * ms11
        d12 = b12 + ms12 + ms21
        d22 = b22 + 2.0 * ms22
        # Q = sqrt(S) dB H ; diffusion Q + Q'
        a11 = q11 * db11 + q12 * db21
        a12 = q11 * db12 + q12 * db22
        a21 = q12 * db11 + q22 * db21
        a22 = q12 * db12 + q22 * db22
        qq11 = a11 * h11 + a12 * h21
        qq12 = a11 * h12 + a12 * h22
        qq21 = a21 * h11 + a22 * h21
        qq22 = a21 * h12 + a22 * h22
        s11 += d11 * dt + 2.0 * qq11 + vj[h]
        s12 += d12 * dt + qq12 + qq21
        s22 += d22 * dt + 2.0 * qq22

        q11, q12, q22, lo = _sqrt_psd_2x2(s11, s12, s22)
        if lo < 0.0:
            projections += 1
            # project onto the PSD cone: S <- sqrt(S)^2 with clipped eigenvalues
            s11, s12, s22 = q11 * q11 + q12 * q12, q12 * (q11 + q22), q12 * q12 + q22 * q22
        xs[:, h + 1] = x1, x2
        sig[h + 1] = s11, s22, s12

    if projections:
        logger.info("PSD projection applied on %d of %d steps (%.3f%%)", projections, n, 100.0 * projections / n)
    return xs, sig, projections


def simulate_heston(params: WishartHestonParams, n: int, T: float = 1.0, seed: int = 0) -> SimPath:
    """Euler-Maruyama simulation of the bivariate Wishart-Heston model.

    The variance matrix is projected back onto the PSD cone (eigenvalues
    clipped at zero) whenever an Euler step leaves it.
    """
    _check_n(n, T)
    xs, sig, proj = _wishart_path(
        params, n, T, _streams(seed), np.zeros((n, 2)), np.zeros(n), np.zeros(2)
    )
    return SimPath(np.linspace(0.0, T, n + 1), xs, sig, T, {"projections": proj})


def simulate_bates(params: BatesParams, n: int, T: float = 1.0, seed: int = 0) -> SimPath:
    """Wishart-Heston with Gaussian log-price jumps and exponential jumps in ``Sigma11``.

    The log-price drift is ``-Sigma_ii / 2 - lambda_i (exp(a_i - b_i^2 / 2) - 1)``.
    """
    _check_n(n, T)
    rngs = _streams(seed)
    dt = T / n
    counts, jumps = _gaussian_compound_jumps(
        rngs[_PRICE_JUMP_COUNT], rngs[_PRICE_JUMP_SIZE],
        params.price_jump_rate, params.price_jump_mean, params.price_jump_sd, n, dt,
    )
    vol_counts = rngs[_VOL_JUMP_COUNT].poisson(params.vol_jump_rate * dt, size=n)
    # sum of k exponential(theta) jumps is Gamma(k, theta); k = 0 gives 0
    vol_jumps = np.where(vol_counts > 0, rngs[_VOL_JUMP_SIZE].gamma(np.maximum(vol_counts, 1), params.vol_jump_scale), 0.0)
    a, b, lam = (np.array(v) for v in (params.price_jump_mean, params.price_jump_sd, params.price_jump_rate))
    compensator = lam * (np.exp(a - 0.5 * b**2) - 1.0)
    xs, sig, proj = _wishart_path(params.heston, n, T, rngs, jumps, vol_jumps, compensator)
    return SimPath(
        np.linspace(0.0, T, n + 1),
        xs,
        sig,
        T,
        {"projections": proj, "price_jump_counts": counts, "vol_jump_counts": vol_counts},
    )


def simulate_sin_corr(params: SinCorrParams | tuple, n: int, T: float = 1.0, seed: int = 0) -> SimPath:
    """Driftless diffusion whose instantaneous correlation is ``sin(pi * t * T)``."""
    if not isinstance(params, SinCorrParams):
        params = SinCorrParams(sigma_sq=params)
    _check_n(n, T)
    dt = T / n
    times = np.linspace(0.0, T, n + 1)
    rho_t = np.sin(np.pi * times * T)
    s2 = np.array(params.sigma_sq)
    # the correlation of the step [t_h, t_h+1] is taken at its left end
    eps = _correlated_normals(_streams(seed)[_W], n, rho_t[:-1])
    inc = np.sqrt(s2 * dt) * eps
    true = np.column_stack([np.full(n + 1, s2[0]), np.full(n + 1, s2[1]), math.sqrt(s2[0] * s2[1]) * rho_t])
    return SimPath(times, _prepend_cumsum(params.x0, inc), true, T)


def poisson_sample(
    path: SimPath,
    asset: int,
    mean_interarrival: float,
    seed: int = 0,
    session_seconds: float | None = None,
) -> TickSeries:
    """Sample one asset of a simulated path at Poissonian trade times.

    Exponential inter-arrival times (in seconds) are accumulated over the
    session and each arrival is snapped to the latest simulated grid point at
    or before it; repeated grid points collapse. The first grid point is
    always kept. ``session_seconds`` defaults to one second per simulation
    step. Returned times are in seconds.
    """
    n = path.n
    session = float(n if session_seconds is None else session_seconds)
    if not mean_interarrival > 0:
        raise ConfigError("mean_interarrival must be positive")
    if mean_interarrival >= session:
        raise TooSparse(f"mean inter-arrival {mean_interarrival}s is not below the session length {session}s")
    rng = np.random.default_rng(np.random.SeedSequence([seed, asset]))
    step = session / n
    chunk = int(1.2 * session / mean_interarrival) + 64
    arrivals = np.cumsum(rng.exponential(mean_interarrival, chunk))
    while arrivals[-1] < session:
        more = arrivals[-1] + np.cumsum(rng.exponential(mean_interarrival, chunk))
        arrivals = np.concatenate([arrivals, more])
    arrivals = arrivals[arrivals < session]
    idx = np.minimum(np.floor(arrivals / step).astype(np.int64), n)
    idx = np.unique(np.concatenate([[0], idx]))
    return TickSeries(idx * step, path.log_prices[asset, idx], session)


# ---------------------------------------------------------------------------
# flat key-value parameter files

MODELS = ("gbm", "merton", "heston", "bates", "sincorr")

_KEYS = {
    "gbm": {"mu1", "mu2", "sigma1_sq", "sigma2_sq", "rho12", "X1_0", "X2_0"},
    "sincorr": {"sigma1_sq", "sigma2_sq", "X1_0", "X2_0"},
    "heston": {
        "X1_0", "X2_0", "Sigma11_0", "Sigma12_0", "Sigma22_0",
        "M11", "M12", "M21", "M22", "alpha11", "alpha12", "alpha22",
        "b_factor", "b11", "b12", "b22", "rho1", "rho2",
    },
}
_KEYS["merton"] = _KEYS["gbm"] | {"a1", "a2", "b1", "b2", "lambda1", "lambda2"}
_KEYS["bates"] = _KEYS["heston"] | {
    "lambdaX1", "lambdaX2", "a1", "a2", "b1", "b2", "lambda_Sigma11", "theta",
}


def read_params_file(path: str | Path) -> dict[str, float]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        try:
            out[key] = float(value)
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: field {key!r} has non-numeric value {value!r}") from None
    return out


def build_params(model: str, values: dict[str, float] | None = None):
    """Model parameters from a flat mapping; absent keys take the default values."""
    if model not in MODELS:
        raise ConfigError(f"unknown model {model!r}; choose from {', '.join(MODELS)}")
    v = dict(values or {})
    unknown = set(v) - _KEYS[model]
    if unknown:
        raise ConfigError(f"unknown field(s) for {model}: {', '.join(sorted(unknown))}")

    def pair(k1, k2, default):
        return (v.get(k1, default[0]), v.get(k2, default[1]))

    x0 = pair("X1_0", "X2_0", DEFAULT_X0)
    if model == "sincorr":
        return SinCorrParams(pair("sigma1_sq", "sigma2_sq", (0.1, 0.2)), x0)
    if model in ("gbm", "merton"):
        g = GbmParams(pair("mu1", "mu2", (0.01, 0.01)), pair("sigma1_sq", "sigma2_sq", (0.1, 0.2)), v.get("rho12", 0.35), x0)
        if model == "gbm":
            return g
        return MertonParams(
            g, pair("a1", "a2", (-0.005, -0.003)), pair("b1", "b2", (0.015, 0.02)),
            pair("lambda1", "lambda2", (100.0, 100.0)),
        )

    d = WishartHestonParams()
    alpha = np.array([
        [v.get("alpha11", 0.0725), v.get("alpha12", 0.06)],
        [v.get("alpha12", 0.06), v.get("alpha22", 0.1325)],
    ])
    bf = v.get("b_factor", 3.5)
    bmat = np.array([
        [v.get("b11", bf * alpha[0, 0]), v.get("b12", bf * alpha[0, 1])],
        [v.get("b12", bf * alpha[0, 1]), v.get("b22", bf * alpha[1, 1])],
    ])
    sigma0 = np.array([
        [v.get("Sigma11_0", d.sigma0[0, 0]), v.get("Sigma12_0", d.sigma0[0, 1])],
        [v.get("Sigma12_0", d.sigma0[0, 1]), v.get("Sigma22_0", d.sigma0[1, 1])],
    ])
    Mm = np.array([
        [v.get("M11", -1.6), v.get("M12", -0.2)],
        [v.get("M21", -0.4), v.get("M22", -1.0)],
    ])
    hp = WishartHestonParams.from_alpha(
        alpha, b_matrix=bmat, x0=x0, sigma0=sigma0, mean_reversion_M=Mm,
        leverage_rho=pair("rho1", "rho2", (-0.3, -0.5)),
    )
    if model == "heston":
        return hp
    return BatesParams(
        hp, pair("lambdaX1", "lambdaX2", (100.0, 100.0)), pair("a1", "a2", (-0.005, -0.003)),
        pair("b1", "b2", (0.015, 0.02)), v.get("lambda_Sigma11", 10.0), v.get("theta", 0.05),
    )


_SIMULATORS = {
    GbmParams: simulate_gbm,
    MertonParams: simulate_merton,
    WishartHestonParams: simulate_heston,
    BatesParams: simulate_bates,
    SinCorrParams: simulate_sin_corr,
}


def simulate(params, n: int, T: float = 1.0, seed: int = 0) -> SimPath:
    """Dispatch to the simulator matching the parameter type."""
    return _SIMULATORS[type(params)](params, n, T, seed)
