"""Exception taxonomy shared by all modules.

Every error raised on a violated precondition or a failed internal
certificate is a subclass of :class:`Barvinok2Error`, so callers can
catch the whole family at once.  ``InternalError`` is reserved for
certified invariants that should be unreachable from valid input; if it
fires, the library itself (not the caller) is wrong.
"""


class Barvinok2Error(Exception):
    """Base class for all library errors."""


class DomainError(Barvinok2Error):
    """Input is outside the declared domain of an operation."""


class ZeroClassError(Barvinok2Error):
    """The matrix class degenerates to zero and has no canonical form."""


class RankError(Barvinok2Error):
    """A rank <= 2 certificate was required but the matrix has rank > 2."""


class NotAChainError(Barvinok2Error):
    """A sequence of bipartitions is not a strictly increasing chain."""


class NotAComplexError(Barvinok2Error):
    """Boundary maps fail d o d = 0 or have inconsistent shapes."""


class NotInvertibleError(Barvinok2Error):
    """A square integer map required to be unimodular is not."""

    def __init__(self, message, degree=None):
        super().__init__(message)
        self.degree = degree


class RelationError(Barvinok2Error):
    """Structured operator pairs violate p^2 + q^2 = 0 or pq + qp = 0."""


class ResourceError(Barvinok2Error):
    """An enumeration would exceed the configured resource cap."""


class InvalidCharacteristic(Barvinok2Error):
    """Field characteristic must be zero or a prime."""


class InternalError(Barvinok2Error):
    """A certified invariant failed; indicates a bug in the library."""
