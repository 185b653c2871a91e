"""Exception types shared across the package."""


class SerialCorrError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSeries(SerialCorrError, ValueError):
    """Input series is empty or contains NaN/Inf."""


class LagOutOfRange(SerialCorrError, ValueError):
    """Requested lag is negative or not smaller than the series length."""


class DegenerateSeries(SerialCorrError, ValueError):
    """Lag-0 autocovariance is zero, so autocorrelations are undefined."""


class InvalidIndex(SerialCorrError, ValueError):
    """Norming-constant index m must be at least 2."""


class InsufficientTail(SerialCorrError, ValueError):
    """Supplied autocovariance sequence has not decayed enough to certify
    the truncation error of a long-run variance sum."""


class InvalidLagCount(SerialCorrError, ValueError):
    """Number of lags under test is outside the legal range."""


class InvalidAlpha(SerialCorrError, ValueError):
    """Significance level must lie strictly between 0 and 1."""


class NonpositiveTau(SerialCorrError, ValueError):
    """Scale parameter tau must be positive."""


class UnknownTheoreticalAcf(SerialCorrError, ValueError):
    """Model has no closed-form autocovariance function."""


class InsufficientData(SerialCorrError, ValueError):
    """Series is too short for the requested block configuration."""


class InvalidParams(SerialCorrError, ValueError):
    """Model or estimator parameters violate their constraints."""


class Overflow(SerialCorrError, FloatingPointError):
    """Simulated path exceeded the overflow guard."""


class BadShape(SerialCorrError, ValueError):
    """Input array has the wrong shape for the requested computation."""


class ConfigError(SerialCorrError, ValueError):
    """Experiment configuration is malformed or inconsistent."""
