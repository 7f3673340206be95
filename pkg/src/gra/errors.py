"""Exception hierarchy for the gra package."""


class GraError(Exception):
    """Base class for all errors raised by this package."""


class GraphValidationError(GraError):
    """An edge list or state vector does not describe a valid graph."""


class NotThreeRegularError(GraphValidationError):
    pass


class NonBinaryStateError(GraphValidationError):
    pass


class SelfLoopError(GraphValidationError):
    pass


class DuplicateEdgeError(GraphValidationError):
    pass


class IndexOutOfRangeError(GraphValidationError):
    pass


class RuleNumberOutOfRangeError(GraError):
    pass


class LengthMismatchError(GraError):
    pass


class OracleCapExceededError(GraError):
    pass


class DegenerateWindowError(GraError):
    pass


class ConfigMismatchError(GraError):
    pass


class EngineInvariantError(GraError):
    """Internal consistency guard tripped; indicates an engine bug."""
