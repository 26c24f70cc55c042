"""Exception types shared across the package."""


class PPTSError(Exception):
    """Base class for all package errors."""


class ConfigurationError(PPTSError):
    """A resource file is missing, unreadable, or malformed."""


class UsageError(PPTSError):
    """An operation was called with inconsistent arguments."""


class SpanOverlapError(PPTSError):
    """Detected spans overlap; the replacement pass is aborted."""


class MappingError(PPTSError):
    """Adding an entry would break a surrogate-map invariant."""


class UnfixableConflictError(PPTSError):
    """A conflict has no generalization; the caller must resample surrogates."""

    def __init__(self, conflict):
        super().__init__(f"no generalization for clue {conflict.clue_surface!r}")
        self.conflict = conflict


class TransportError(PPTSError):
    """The remote backend failed; carries the provider payload when available."""

    def __init__(self, message: str, payload: str | None = None):
        super().__init__(message)
        self.payload = payload


class BackendTimeoutError(PPTSError):
    """The remote backend did not answer within the configured timeout."""


class SessionNotFoundError(PPTSError):
    """No session exists for the given identifier."""
