"""Exception types shared across the package."""


class DomainError(ValueError):
    """A precondition or hypothesis of an operation is violated."""


class VerificationError(RuntimeError):
    """A mathematical consistency check failed."""


class CacheError(ValueError):
    """A persisted cache file is malformed or has an unsupported version."""
