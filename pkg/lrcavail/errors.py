"""
Exception hierarchy for LRCAvail.

Library code raises these; only the CLI turns them into exit codes.
"""


class LRCError(Exception):
    """Base class for every error raised by the library."""


class FieldError(LRCError):
    """Invalid field parameters or an undefined field operation."""


class DimensionError(LRCError, ValueError):
    """Shapes, lengths or index sets do not fit together."""


class BudgetExceededError(LRCError):
    """An exhaustive search would exceed its configured budget."""


class ConstructionError(LRCError):
    """A code builder was called with parameters it cannot realize."""


class GraphSamplingError(ConstructionError):
    """No admissible bipartite graph was found."""


class ShorteningError(LRCError):
    """The local-check set cannot supply the requested independent checks."""


class BoundError(LRCError):
    """A bound was evaluated outside its domain."""


class ArtifactError(LRCError):
    """A code artifact could not be read or is inconsistent."""


class InternalError(LRCError):
    """An invariant broke even though every precondition held."""
