"""Exception types raised across the package.

Every operation failure maps to one of these so callers (and the CLI)
can translate failures into exit codes without string matching.
"""


class QrsAdaptError(Exception):
    """Base class for all package-specific errors."""


# ---- pattern / wavelet construction ----

class TooFewSamples(QrsAdaptError):
    """Input series is too short to form a valid pattern."""


class NonFiniteInput(QrsAdaptError):
    """Input contains NaN or infinite values."""


class DegenerateFit(QrsAdaptError):
    """The constrained fit has no usable solution (e.g. constant pattern)."""


class DegreeTooHigh(QrsAdaptError):
    """Requested polynomial degree exceeds what the pattern supports."""


class EmptyWavelet(QrsAdaptError):
    """Wavelet has no sampled waveform to analyze."""


# ---- transform / detection ----

class ScaleTooSmall(QrsAdaptError):
    """Scale maps to a kernel shorter than the minimum length."""


class SignalTooShort(QrsAdaptError):
    """Signal shorter than the operation requires."""


class EmptyBank(QrsAdaptError):
    """Wavelet bank contains no wavelets."""


class ConfigInvalid(QrsAdaptError):
    """Configuration value outside its valid range."""


# ---- file I/O ----

class FileFormatError(QrsAdaptError):
    """Base class for text-format violations; carries the offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)


class MissingHeader(FileFormatError):
    """File does not start with the required header line."""


class BadSample(FileFormatError):
    """A sample line is not a finite decimal value."""


class BadIndex(FileFormatError):
    """An annotation line is not a valid sample index."""


class NotIncreasing(FileFormatError):
    """Annotation indices are not strictly increasing."""


class EmptyFile(FileFormatError):
    """File contains no content."""


class IoFailure(QrsAdaptError):
    """Underlying OS write failure."""
