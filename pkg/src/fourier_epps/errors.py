"""Exception hierarchy.

Every error raised by the package derives from :class:`FourierEppsError`.
The two intermediate classes map onto CLI exit codes: :class:`DataError`
(bad or insufficient input, exit 3) and :class:`NumericalError`
(degenerate estimates, exit 4).
"""


class FourierEppsError(Exception):
    pass


class DataError(FourierEppsError, ValueError):
    pass


class NumericalError(FourierEppsError, ArithmeticError):
    pass


class NoPriorObservation(DataError):
    """A grid point precedes the first observation of the series."""


class ZeroVolumeGroup(DataError):
    pass


class BadPrice(DataError):
    pass


class InsufficientData(DataError):
    pass


class GridMismatch(DataError):
    pass


class TooSparse(DataError):
    pass


class BadTimescale(DataError):
    pass


class BadTolerance(DataError):
    pass


class ModeRangeTooNarrow(DataError):
    pass


class ConfigError(DataError):
    """Invalid estimator or model configuration."""


class DegenerateEstimate(NumericalError):
    pass


class NoSaturation(NumericalError):
    """The Epps curve is still moving at the largest sampling interval."""
