"""Exception hierarchy shared across the package."""


class SummatoriaError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(SummatoriaError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ResourceError(SummatoriaError, RuntimeError):
    """A request exceeds a configured size or memory budget."""


class IntegrityError(SummatoriaError):
    """A cache file failed a structural check (magic, version, checksum)."""


class CorruptionError(SummatoriaError):
    """A decoded artifact violates its own type invariants."""
