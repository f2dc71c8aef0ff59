"""Package-wide error types."""


class ResourceLimitError(RuntimeError):
    """Raised when a build would exceed its configured size or step budget."""
