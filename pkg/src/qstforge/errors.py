"""Exception types shared across the package."""


class InsufficientDataError(ValueError):
    """Too few samples for a statistical estimate."""


class ResourceLimitError(RuntimeError):
    """Requested problem size exceeds what the dense/full-space path supports."""
