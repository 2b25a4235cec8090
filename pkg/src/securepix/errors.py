"""Exception hierarchy.

Each error class that can surface through the command line carries a distinct
process exit code so batch scripts can tell failure modes apart without
parsing messages.
"""


class SecurePixError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ConfigError(SecurePixError):
    """Invalid configuration value or malformed config file."""

    exit_code = 3


class MalformedImage(SecurePixError):
    """Unreadable or unsupported PGM/PPM data."""

    exit_code = 4


class MalformedKeyFile(SecurePixError):
    """Key file fails magic, range, or shape validation."""

    exit_code = 5


class DimensionMismatch(SecurePixError):
    """Grids that must agree in shape do not."""

    exit_code = 6


class DomainError(SecurePixError):
    """An operation was called outside its legal input domain."""

    exit_code = 7


class NonPositiveThickness(DomainError):
    pass


class NegativePhotocurrent(DomainError):
    pass


class NegativeDuration(DomainError):
    pass


class OutOfRange(DomainError):
    pass


class CodeOutOfRange(DomainError):
    pass


class LevelOutOfRange(DomainError):
    pass


class RowOutOfRange(DomainError):
    pass


class AmplitudeOutOfRange(DomainError):
    pass


class DisturbDuringReadout(DomainError):
    """Readout gate drive would alter a stored polarization state."""


class NonMonotoneCurve(SecurePixError):
    """A transfer curve violated its monotonicity contract."""

    exit_code = 8


class DegenerateVariance(SecurePixError):
    """Correlation requested on a zero-variance sample."""

    exit_code = 9


class EmptyBatch(SecurePixError):
    """A batch operation received no items."""

    exit_code = 10
