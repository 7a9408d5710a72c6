"""Exception hierarchy shared by all trotterlab modules."""


class TrotterlabError(Exception):
    """Base class for all library errors."""


class DimensionError(TrotterlabError):
    """Operands act on different qubit counts / Hilbert-space dimensions."""


class CapacityError(TrotterlabError):
    """Dense realization requested above the supported qubit cap."""


class DomainError(TrotterlabError):
    """Argument outside its declared domain (times, intervals, grids)."""


class ValidityError(TrotterlabError):
    """Input violates a structural precondition (e.g. non-Hermitian matrix)."""


class ConvergenceError(TrotterlabError):
    """An iterative refinement failed to converge within its budget."""


class InsufficientDataError(TrotterlabError):
    """Not enough data points for the requested fit."""


class OptimizationError(TrotterlabError):
    """An optimizer produced a non-finite objective or failed outright."""


class DegenerateGaugeError(TrotterlabError):
    """Gauge-potential denominator vanished (commuting Hamiltonian pair)."""


class ConstructionError(TrotterlabError):
    """Invalid parameters for building a model Hamiltonian."""


class LookupError_(TrotterlabError):
    """Unknown preset or named resource."""
