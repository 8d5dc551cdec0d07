"""Exception taxonomy shared across the package.

CLI exit-code mapping: ConfigError and its subclasses exit 2, DataError and
subclasses exit 3, NumericError and subclasses exit 4.
"""


class FhinvError(Exception):
    """Base class for all package errors."""


class ConfigError(FhinvError):
    """Invalid configuration, argument, or input validation failure."""


class DomainError(ConfigError):
    """Mathematical domain violation (argument outside the defined range)."""


class DimensionError(ConfigError):
    """Shape or dimension mismatch between arrays or layers."""


class MissingBandError(ConfigError):
    """A required raster band is absent from a bundle."""


class GridMismatchError(ConfigError):
    """Rasters that must share a grid do not."""


class ConstantFeatureError(ConfigError):
    """A feature column is constant and cannot be normalized."""


class DataError(FhinvError):
    """I/O-level failure reading or writing artifacts."""


class ChecksumError(DataError):
    """Stored band content does not match its recorded checksum."""


class TruncatedFileError(DataError):
    """Band file is shorter or longer than the manifest implies."""


class ManifestError(DataError):
    """Manifest and band files are mutually inconsistent."""


class NumericError(FhinvError):
    """Numerical failure during model evaluation or optimization."""


class SingularGeometryError(NumericError):
    """Acquisition geometry puts the look direction at grazing/zero sine."""


class DegenerateProfileError(NumericError):
    """Profile mass integral fell below the guard threshold."""


class NoSensitivityError(NumericError):
    """Vertical wavenumber too small for height inversion."""


class DivergenceError(NumericError):
    """Training loss became non-finite."""


class NoSolutionError(NumericError):
    """A bracketed solve could not match the requested target."""


class StaleCacheError(FhinvError):
    """Backward pass invoked with a cache from a different forward pass."""
