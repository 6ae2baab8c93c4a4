"""Exception types shared across the simulator."""


class PhotonKickError(Exception):
    """Base class for all simulator errors."""


class DomainError(PhotonKickError):
    """A kinematic quantity left its physical domain (e.g. velocity >= c)."""


class CapReached(PhotonKickError):
    """The absorption counter hit the configured maximum."""


class NonMonotone(PhotonKickError):
    """Consecutive velocities decreased, which signals a corrupted accumulator."""


class DegenerateStep(PhotonKickError):
    """A velocity increment sits below the floating-point noise floor."""


class UsageError(PhotonKickError):
    """Invalid command line, flag value, or config-file entry (exit code 2)."""


class IoError(PhotonKickError):
    """Output could not be written (exit code 3)."""
