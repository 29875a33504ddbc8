"""Error taxonomy for the lab.

Every error is also a ValueError so callers that only know about
ValueError keep working.
"""


class LabError(ValueError):
    """Base class for all lab errors"""


class DegenerateInputError(LabError):
    """Empty support, n < 1, or an otherwise empty problem"""


class ParityError(LabError):
    """Weight does not share the parity of n, or lies outside [-n, n]"""


class DomainError(LabError):
    """Parameter outside its admissible range (negative mass, rho outside [0, 1], ...)"""


class PreconditionError(LabError):
    """Input fails a stated precondition (e.g. not k-uniform)"""


class DimensionMismatchError(LabError):
    """Two objects that must share n (or k) do not"""


class HypothesisError(LabError):
    """Hypotheses of an inequality checker are not met"""


class InfeasibleError(LabError):
    """No distribution satisfies the requested constraints"""


class SolverError(LabError):
    """Exact solver gave up (pivot guard reached)"""
