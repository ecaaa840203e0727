"""Exception types shared across the package."""


class CallSelectError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(CallSelectError):
    """Bad input data or a violated precondition the caller can fix."""


class InvariantError(CallSelectError):
    """An internal invariant was broken; indicates a bug upstream."""
