from .spectral import (
    GapRatioStats,
    Sector,
    Surmise,
    classify_ensemble,
    gap_ratios,
    goe_participation_ratio,
    participation_ratios,
    pool,
    random_couplings,
    ratios_from_spectrum,
    sector_spectra,
    surmise_cdf,
    surmise_mean,
    surmise_pdf,
)
from .transport import TransportSeries, spreading_exponent, transport_series

__all__ = [
    "GapRatioStats",
    "Sector",
    "Surmise",
    "classify_ensemble",
    "gap_ratios",
    "goe_participation_ratio",
    "participation_ratios",
    "pool",
    "random_couplings",
    "ratios_from_spectrum",
    "sector_spectra",
    "surmise_cdf",
    "surmise_mean",
    "surmise_pdf",
    "TransportSeries",
    "spreading_exponent",
    "transport_series",
]
