"""Exception taxonomy shared across the engine.

The command line maps these onto exit codes: usage problems exit 1,
NumericalError exits 3, and every other EngineError exits 2.
"""


class EngineError(Exception):
    """Base class for all errors raised by this package."""


class FeatureFileError(EngineError):
    """A feature file is truncated, malformed, or not a feature file at all."""


class ManifestError(EngineError):
    """A dataset manifest fails validation."""


class ConfigError(EngineError):
    """A benchmark configuration is inconsistent or incomplete."""


class DataError(EngineError):
    """Input data cannot be processed as requested."""


class InsufficientDataError(DataError):
    """Fewer observations than the operation requires."""


class DegenerateSignalError(DataError):
    """A waveform statistic is undefined, e.g. all samples are equal."""


class EmptyReferenceError(DataError):
    """A reference transcript normalizes to zero words."""


class WavFormatError(DataError):
    """A WAV file is malformed or uses an unsupported encoding."""


class NumericalError(EngineError):
    """A numerical routine failed or produced a non-finite result."""
