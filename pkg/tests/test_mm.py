from __future__ import annotations

import logging
import time
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from fourier_epps.data import TWO_PI, TickSeries, rescale_to_two_pi
from fourier_epps.errors import BadTimescale, ConfigError, ModeRangeTooNarrow
from fourier_epps.fourier import FourierCoeffs, price_coeffs
from fourier_epps.mm import (
    MmConfig,
    cross_vol_coeffs,
    fejer_inversion,
    integrated_correlation,
    mm_integrated,
    mm_spot,
    mm_vol_coeffs,
    n_from_dt,
    spot_from_coeffs,
)
from fourier_epps.models import GbmParams, poisson_sample, simulate_gbm


def async_pair(rng, n1, n2, T=1.0, scale=0.01):
    out = []
    for n in (n1, n2):
        t = np.sort(rng.choice(np.arange(1, 10_000), n - 1, replace=False)) * (T / 10_000)
        t = np.concatenate([[0.0], t])
        out.append(TickSeries(t, np.cumsum(rng.normal(0, scale, n)), T))
    return out


@pytest.fixture(scope="module")
def gbm_path():
    return simulate_gbm(GbmParams(), 28800, 1.0, seed=1)


# --- n_from_dt -------------------------------------------------------------------


@pytest.mark.parametrize(
    "dt, T, N",
    [(60, 28800, 239), (100, 28800, 143), (220, 28800, 64), (300, 28200, 46), (1, 28800, 14399), (28800, 28800, 0)],
)
def test_n_from_dt_examples(dt, T, N):
    assert n_from_dt(dt, T) == N


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 30000), st.integers(1, 30000))
def test_n_from_dt_matches_exact_rational(dt, T):
    if dt > T:
        with pytest.raises(BadTimescale):
            n_from_dt(dt, T)
    else:
        assert n_from_dt(dt, T) == oracles.n_from_dt(dt, T)


def test_n_from_dt_with_fractional_inputs():
    assert n_from_dt(0.1, 0.3) == oracles.n_from_dt("0.1", "0.3") == 1
    assert n_from_dt(1 / 3, 1.0) == 1


@pytest.mark.parametrize("dt", [0.0, -1.0, 28801.0])
def test_n_from_dt_rejects_bad_timescale(dt):
    with pytest.raises(BadTimescale):
        n_from_dt(dt, 28800)


# --- configuration -----------------------------------------------------------------


def test_config_rules():
    with pytest.raises(ConfigError):
        MmConfig(10, 11)
    with pytest.raises(ConfigError):
        MmConfig(10, 0)
    with pytest.warns(UserWarning, match="alias"):
        MmConfig(10, 6)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        MmConfig(10, 5)
    assert MmConfig.from_dt(300, 28200, 10).N == 46


def test_aliasing_is_logged(caplog):
    s = TickSeries(np.linspace(0, 1, 21), np.random.default_rng(0).normal(size=21), 1.0)
    with caplog.at_level(logging.WARNING, logger="fourier_epps.mm"):
        mm_spot(s, s, MmConfig(8, 4))
    assert "Nyquist" in caplog.text


# --- volatility coefficients ----------------------------------------------------------


def test_zero_coefficients_give_zero_alpha():
    z = FourierCoeffs(-8, 8, np.zeros(17, dtype=complex))
    assert np.all(mm_vol_coeffs(z, z, 5, 3).values == 0)


def test_mode_range_too_narrow():
    z = FourierCoeffs(-7, 7, np.zeros(15, dtype=complex))
    with pytest.raises(ModeRangeTooNarrow):
        mm_vol_coeffs(z, z, 5, 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.integers(1, 4))
def test_alpha_matches_double_loop(seed, N, M):
    rng = np.random.default_rng(seed)
    K = N + M
    ci = FourierCoeffs(-K, K, rng.normal(size=2 * K + 1) + 1j * rng.normal(size=2 * K + 1))
    cj = FourierCoeffs(-K, K, rng.normal(size=2 * K + 1) + 1j * rng.normal(size=2 * K + 1))
    got = mm_vol_coeffs(ci, cj, N, M)
    for k in range(-M, M + 1):
        assert got[k] == pytest.approx(oracles.bohr_alpha(ci.__getitem__, cj.__getitem__, N, k), abs=1e-12)


def test_symmetrised_coefficients_agree_at_zero_mode():
    si, sj = (rescale_to_two_pi(s) for s in async_pair(np.random.default_rng(4), 80, 60))
    ci, cj = price_coeffs(si, 30), price_coeffs(sj, 30)
    a, b = mm_vol_coeffs(ci, cj, 20, 10), cross_vol_coeffs(ci, cj, 20, 10)
    assert b[0] == pytest.approx(a[0], rel=1e-12)
    np.testing.assert_allclose(b.values, cross_vol_coeffs(cj, ci, 20, 10).values, rtol=1e-13)


def test_alpha_zero_is_nonnegative_for_one_asset():
    s = rescale_to_two_pi(async_pair(np.random.default_rng(1), 200, 150)[0])
    c = price_coeffs(s, 60)
    a = mm_vol_coeffs(c, c, 50, 10)
    assert a[0].real >= 0 and abs(a[0].imag) < 1e-15
    np.testing.assert_allclose(a.window(-10, -1)[::-1], np.conj(a.window(1, 10)), atol=1e-15)


# --- spot estimates --------------------------------------------------------------------


def test_spot_matches_textbook_estimator():
    si, sj = async_pair(np.random.default_rng(2), 40, 30, T=28800.0)
    N, M = 7, 3
    taus = np.linspace(0, TWO_PI, 11)
    ci = price_coeffs(rescale_to_two_pi(si), N + M, "direct")
    cj = price_coeffs(rescale_to_two_pi(sj), N + M, "direct")
    sp = spot_from_coeffs(ci, cj, N, M, taus, 28800.0)
    def brute(a, b):
        return oracles.mm_spot(a.times, a.log_prices, b.times, b.log_prices, 28800.0, N, M, taus)

    np.testing.assert_allclose(sp.s11, brute(si, si), rtol=1e-10, atol=1e-14)
    np.testing.assert_allclose(sp.s22, brute(sj, sj), rtol=1e-10, atol=1e-14)
    # the cross entry averages both asset orders
    np.testing.assert_allclose(sp.s12, 0.5 * (brute(si, sj) + brute(sj, si)), rtol=1e-10, atol=1e-14)
    np.testing.assert_allclose(sp.eval_times, taus * 28800.0 / TWO_PI)


def test_constant_prices_give_zero_spot():
    s = TickSeries(np.linspace(0, 1, 50), np.full(50, 4.6), 1.0)
    sp = mm_spot(s, s, MmConfig(20, 5))
    assert np.all(sp.s11 == 0) and not sp.valid.any()


def test_m_equal_one_is_the_flat_integrated_level():
    si, sj = async_pair(np.random.default_rng(3), 300, 250)
    sp = mm_spot(si, sj, MmConfig(100, 1))
    np.testing.assert_allclose(sp.s12, mm_integrated(si, sj, 100), rtol=1e-12)
    np.testing.assert_allclose(sp.s11, mm_integrated(si, si, 100), rtol=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.1, 10.0))
def test_scale_equivariance(seed, c):
    si, sj = async_pair(np.random.default_rng(seed), 120, 90)
    scaled = [TickSeries(s.times, c * s.log_prices, s.session_length) for s in (si, sj)]
    a = mm_spot(si, sj, MmConfig(40, 8, 50))
    b = mm_spot(*scaled, MmConfig(40, 8, 50))
    for x, y in ((a.s11, b.s11), (a.s22, b.s22), (a.s12, b.s12)):
        np.testing.assert_allclose(y, c * c * x, rtol=1e-9, atol=1e-14 * c * c)
    v = a.valid & b.valid
    np.testing.assert_allclose(b.rho[v], a.rho[v], rtol=1e-8, atol=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_permutation_symmetry(seed):
    si, sj = async_pair(np.random.default_rng(seed), 100, 130)
    a = mm_spot(si, sj, MmConfig(40, 10, 50))
    b = mm_spot(sj, si, MmConfig(40, 10, 50))
    np.testing.assert_allclose(a.s12, b.s12, rtol=1e-12, atol=1e-16)


def test_spot_is_real(gbm_path):
    si, sj = poisson_sample(gbm_path, 0, 30), poisson_sample(gbm_path, 1, 30)
    sp = mm_spot(si, sj, MmConfig(n_from_dt(60, 28800), 50))
    assert sp.imag_residual <= 1e-8
    assert np.all(np.diff(sp.eval_times) > 0) and sp.eval_times[-1] == 28800


def test_synchronous_gbm_recovery(gbm_path):
    si, sj = gbm_path.series(0), gbm_path.series(1)
    sp = mm_spot(si, sj, MmConfig(si.nyquist, 100))
    interior = (sp.eval_times >= 0.1) & (sp.eval_times <= 0.9)
    assert np.all(np.abs(sp.s11[interior] - 0.1) < 0.03)
    # pointwise rho with M = 100 wanders by ~0.1; the band applies to the interior average
    assert abs(sp.rho[interior].mean() - 0.35) < 0.07


def test_fejer_inversion_of_single_mode():
    alpha = FourierCoeffs(-2, 2, np.array([0, 0, 1.0, 0, 0], dtype=complex))
    np.testing.assert_allclose(fejer_inversion(alpha, 2, np.linspace(0, 6, 7)), 1.0)


# --- integrated estimates -------------------------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 60))
def test_dirichlet_at_full_resolution_is_realised_covariance(seed, half):
    # on a uniform grid with n = 2N + 1 increments the Dirichlet kernel is an exact DFT identity
    n = 2 * half + 1
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, 1.0, n + 1)
    xi, xj = rng.normal(size=n + 1), rng.normal(size=n + 1)
    si, sj = TickSeries(t, xi, 1.0), TickSeries(t, xj, 1.0)
    for method in ("direct", "fast"):
        assert mm_integrated(si, sj, half, method=method) == pytest.approx(
            float(np.dot(np.diff(xi), np.diff(xj))), rel=1e-9, abs=1e-9
        )


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 80))
def test_fejer_integrated_variance_is_nonnegative(seed, N):
    si, _ = async_pair(np.random.default_rng(seed), 60, 2)
    assert mm_integrated(si, si, N, "fejer") >= -1e-15


def test_integrated_constant_price_is_zero():
    s = TickSeries(np.linspace(0, 1, 30), np.full(30, 1.0), 1.0)
    assert mm_integrated(s, s, 10) == 0.0


def test_integrated_gbm_variance():
    vals = []
    for seed in range(10):
        p = simulate_gbm(GbmParams(), 28800, 1.0, seed)
        s = p.series(0)
        vals.append(mm_integrated(s, s, s.nyquist))
    assert np.all(np.abs(np.array(vals) - 0.1) < 0.01)


def test_integrated_correlation_under_asynchrony_is_small(gbm_path):
    si, sj = poisson_sample(gbm_path, 0, 30), poisson_sample(gbm_path, 1, 30)
    assert abs(integrated_correlation(si, sj, n_from_dt(1, 28800))) < 0.1
    assert integrated_correlation(si, sj, n_from_dt(600, 28800)) > 0.2


def test_unknown_kernel():
    s = TickSeries(np.linspace(0, 1, 30), np.arange(30.0), 1.0)
    with pytest.raises(ConfigError):
        mm_integrated(s, s, 5, "boxcar")


def test_n_from_dt_is_fast():
    t0 = time.perf_counter()
    for dt in (60, 100, 220):
        n_from_dt(dt, 28800)
    n_from_dt(300, 28200)
    assert time.perf_counter() - t0 < 1e-3
