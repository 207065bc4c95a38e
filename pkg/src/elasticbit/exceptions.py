"""Exception types raised by the elasticbit pipeline."""


class ElasticBitError(Exception):
    """Base class for computation failures (CLI exit code 1)."""


class SingularDrive(ElasticBitError):
    """Undamped drive exactly at an eigenfrequency; steady state does not exist."""


class ZeroState(ElasticBitError):
    """Both granule amplitudes vanish, so the modal state cannot be normalized."""


class UndefinedPhase(ElasticBitError):
    """Argument requested for a complex number that is (numerically) zero."""


class NotConverged(ElasticBitError):
    """Extracted steady amplitudes still drift between successive windows."""

    def __init__(self, message, drift=None):
        super().__init__(message)
        self.drift = drift


class NonFinite(ElasticBitError):
    """Time integration produced a non-finite state."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t
