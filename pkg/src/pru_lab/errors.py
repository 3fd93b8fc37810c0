"""Error taxonomy shared by all modules."""


class PruLabError(Exception):
    """Base class for all package errors."""


class CapacityError(PruLabError, ValueError):
    """An enumeration or dimension budget would be exceeded."""


class DomainError(PruLabError, ValueError):
    """Inputs are outside the mathematical domain of the operation
    (mismatched sizes, too few rows, singular Gram system, ...)."""


class DegenerateInputError(PruLabError, ValueError):
    """The input state has (numerically) no support where the operation
    needs it, e.g. renormalizing after a projection of trace ~ 0."""


class ConsistencyError(PruLabError, RuntimeError):
    """An internal exact identity failed beyond tolerance; indicates a bug
    or numerical degeneracy rather than bad user input."""
