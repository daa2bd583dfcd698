"""Exception hierarchy."""


class HodgeSpectraError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HodgeSpectraError, ValueError):
    """An input lies outside the domain of an operation."""


class ConsistencyError(HodgeSpectraError):
    """An internal consistency check failed; points at an assembly bug."""


class ConjectureViolation(HodgeSpectraError):
    """A numerical minimum fell below the closed-form first eigenvalue."""


class InversionError(HodgeSpectraError):
    """Base class for inverse-problem failures."""


class InconsistentInvariantsError(InversionError):
    """No metric reproduces the supplied spectral invariants."""


class AmbiguityError(InversionError):
    """Two non-isometric metrics reproduce the supplied invariants."""
