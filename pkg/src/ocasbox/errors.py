"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input is well-formed but outside the domain an operation is defined on."""


class CheckpointError(RuntimeError):
    """A checkpoint file is corrupt or belongs to a different configuration."""


class ResourceError(MemoryError):
    """A precomputation would exceed its memory budget."""
