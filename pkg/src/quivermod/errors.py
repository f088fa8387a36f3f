"""Exception types raised by quivermod."""


class QuiverError(ValueError):
    """Base class for every error the library raises on bad input."""


class DomainError(QuiverError):
    """Input outside the domain of an operation (unknown vertex, bad vector...)."""


class PreconditionError(QuiverError):
    """An operation was called on a pair that does not satisfy its precondition."""


class WeightIncompatibleError(PreconditionError):
    """The weight cannot be transported across a large vertex.

    Raised when theta(u) != 0 but the matching equality between alpha(u) and
    the incoming (theta(u) > 0) or outgoing (theta(u) < 0) dimension sum fails.
    In that situation alpha is not theta-semistable.
    """


class ComplexityError(QuiverError):
    """A request exceeds the complexity guard; pass ``force=True`` to override."""
