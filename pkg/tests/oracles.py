"""Independent reference implementations used as test oracles.

Everything here is written from the defining formulas with plain loops or
closed forms, sharing no code with the package, so agreement is evidence
rather than tautology.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np
from scipy.linalg import expm


def n_from_dt(dt, T) -> int:
    """Exact rational evaluation of floor((T/dt - 1) / 2)."""
    ratio = Fraction(T) / Fraction(dt)
    return math.floor((ratio - 1) / 2)


def previous_tick(times, values, dt, t0, t_end):
    out = []
    h = 0
    while t0 + h * dt <= t_end + 1e-9 * dt:
        g = t0 + h * dt
        last = None
        for t, v in zip(times, values):
            if t <= g:
                last = v
        out.append(last)
        h += 1
    return out


def increment_coeff(times, x, k) -> complex:
    """(1/2pi) sum_h exp(-i k t_h) (x_{h+1} - x_h) on times already in [0, 2pi]."""
    s = 0j
    for h in range(len(times) - 1):
        s += cmath.exp(-1j * k * times[h]) * (x[h + 1] - x[h])
    return s / (2 * math.pi)


def bohr_alpha(fi, fj, N, k) -> complex:
    """2pi/(2N+1) sum_{|s|<=N} fi(s) fj(k-s), with fi, fj callables."""
    return 2 * math.pi / (2 * N + 1) * sum(fi(s) * fj(k - s) for s in range(-N, N + 1))


def mm_spot(ti, xi, tj, xj, T, N, M, taus):
    """Spot covariance by the textbook double loop, in variance per session."""
    ti = [2 * math.pi * t / T for t in ti]
    tj = [2 * math.pi * t / T for t in tj]
    K = N + M
    ci = {k: increment_coeff(ti, xi, k) for k in range(-K, K + 1)}
    cj = {k: increment_coeff(tj, xj, k) for k in range(-K, K + 1)}
    alphas = {k: bohr_alpha(ci.get, cj.get, N, k) for k in range(-M, M + 1)}
    out = []
    for tau in taus:
        z = sum((1 - abs(k) / M) * cmath.exp(1j * k * tau) * alphas[k] for k in range(-M, M + 1))
        out.append(2 * math.pi * z.real)
    return np.array(out)


def ct_v(values, n, k) -> complex:
    H = len(values) - 1
    return sum(
        cmath.exp(-2j * math.pi * k * h / H) * math.cos(math.sqrt(n) * (values[h + 1] - values[h]))
        for h in range(H)
    ) / n


def ct_spot(values, T_sessions, M, u):
    """Spot variance at fractions ``u`` of the grid span."""
    H = len(values) - 1
    n = H / T_sessions
    v = {k: ct_v(values, n, k) for k in range(-M, M + 1)}
    out = []
    for x in u:
        z = sum((1 - abs(k) / M) * v[k] * cmath.exp(2j * math.pi * k * x) for k in range(-M, M + 1)) / T_sessions
        out.append(-2 * math.log(z.real) if z.real > 0 else math.nan)
    return np.array(out)


def ct_zero_inflated(sigma_sq, dt, mean) -> float:
    """Approximate CT level on previous-tick grids of Poisson-sampled diffusions.

    A fraction q = exp(-dt/mean) of grid increments is zero and the rest are
    taken as Gaussian with variance inflated by the mean gap 1/p.
    """
    q = math.exp(-dt / mean)
    p = 1 - q
    return -2 * math.log(q + (1 - q) * math.exp(-sigma_sq / (2 * p)))


def ct_geometric_gap(sigma_sq, dt, mean) -> float:
    """Exact expectation of the same estimator.

    Non-zero increments span G grid steps with G ~ Geometric(p), so
    E cos(sqrt(n) dX) = q + p * E[exp(-sigma^2 G / 2)] with the geometric
    generating function p e^{-c} / (1 - q e^{-c}).
    """
    q = math.exp(-dt / mean)
    p = 1 - q
    ec = math.exp(-sigma_sq / 2)
    return -2 * math.log(q + p * p * ec / (1 - q * ec))


def wishart_mean(b, M, sigma0, t):
    """E[Sigma(t)] from the linear ODE dS/dt = b + M S + S M' (matrix exponential)."""
    I = np.eye(2)
    L = np.kron(I, M) + np.kron(M, I)  # column-major vec
    A = np.zeros((5, 5))
    A[:4, :4] = L
    A[:4, 4] = np.asarray(b).reshape(-1, order="F")
    y0 = np.append(np.asarray(sigma0).reshape(-1, order="F"), 1.0)
    return (expm(A * t) @ y0)[:4].reshape(2, 2, order="F")


def wishart_mean_integral(b, M, sigma0, T, steps=2000):
    ts = np.linspace(0.0, T, steps + 1)
    vals = np.array([wishart_mean(b, M, sigma0, t) for t in ts])
    w = np.full(steps + 1, 1.0)
    w[0] = w[-1] = 0.5
    return np.tensordot(w, vals, axes=1) * (T / steps) / T


def wishart_stationary(b, M):
    """Solve b + M S + S M' = 0 as a 4x4 linear system."""
    I = np.eye(2)
    L = np.kron(I, M) + np.kron(M, I)
    return np.linalg.solve(L, -np.asarray(b).reshape(-1, order="F")).reshape(2, 2, order="F")
