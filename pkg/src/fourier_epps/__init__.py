"""Fourier spot volatility estimators and the Epps effect.

Malliavin-Mancino and Cuchiero-Teichmann spot (co)variance estimators,
bivariate model simulators, asynchronous sampling and Epps-curve tools.
"""

__version__ = "0.1.0"

from .ct import CtConfig, ct_spot_covariance, ct_spot_variance
from .data import TaqRecord, TickSeries, UniformGrid, ingest_taq, previous_tick
from .epps import EppsCurve, Surface, epps_curve, saturation_dt, surface_dt, surface_m
from .fourier import FourierCoeffs, nufft1, price_coeffs, price_coeffs_direct, price_coeffs_fast
from .mm import MmConfig, SpotPath, mm_integrated, mm_spot, n_from_dt
from .models import (
    BatesParams,
    GbmParams,
    MertonParams,
    SimPath,
    SinCorrParams,
    WishartHestonParams,
    poisson_sample,
    simulate,
)

__all__ = [
    "BatesParams", "CtConfig", "EppsCurve", "FourierCoeffs", "GbmParams", "MertonParams",
    "MmConfig", "SimPath", "SinCorrParams", "SpotPath", "Surface", "TaqRecord", "TickSeries",
    "UniformGrid", "WishartHestonParams", "ct_spot_covariance", "ct_spot_variance",
    "epps_curve", "ingest_taq", "mm_integrated", "mm_spot", "n_from_dt", "nufft1",
    "poisson_sample", "previous_tick", "price_coeffs", "price_coeffs_direct",
    "price_coeffs_fast", "saturation_dt", "simulate", "surface_dt", "surface_m",
]
