"""
异常定义 - graph_wiener 统一异常层级

Every error carries an ``exit_code``: 2 for usage problems (bad arguments,
violated preconditions), 3 for numerical failures. The CLI maps them directly.
"""
from typing import Optional


class GraphWienerError(Exception):
    """Base class for all library errors."""

    exit_code = 3


class UsageError(GraphWienerError, ValueError):
    """Violated precondition or invalid argument."""

    exit_code = 2


class NumericalError(GraphWienerError, ArithmeticError):
    """A linear-algebra step failed or produced unusable output."""

    exit_code = 3


# --- graph_core -----------------------------------------------------------

class GraphValidationError(UsageError):
    pass


class NonSymmetricError(GraphValidationError):
    pass


class NegativeWeightError(GraphValidationError):
    pass


class NonzeroDiagonalError(GraphValidationError):
    pass


class GeneratorParameterError(UsageError):
    pass


class DisconnectedAfterRetriesError(GraphWienerError, RuntimeError):
    """Retry budget exhausted without producing a connected graph."""

    exit_code = 3

    def __init__(self, kind: str, retries: int):
        self.kind = kind
        self.retries = retries
        super().__init__(f"{kind} generator produced no connected graph after {retries} attempts")


# --- shapes / indices -----------------------------------------------------

class DimensionMismatchError(UsageError):
    pass


class IndexOutOfRangeError(GraphWienerError, IndexError):
    exit_code = 2


# --- spectral -------------------------------------------------------------

class ConvergenceFailureError(NumericalError):
    pass


class NonFiniteKernelValueError(UsageError):
    pass


class UnknownKernelError(UsageError):
    pass


class KernelNotPositiveError(UsageError):
    pass


# --- stationarity ---------------------------------------------------------

class EmptySampleSetError(UsageError):
    pass


# --- sampling -------------------------------------------------------------

class DuplicateVertexError(UsageError):
    pass


class KExceedsNError(UsageError):
    pass


class NotDivisibleError(UsageError):
    def __init__(self, n: int, m_ratio: int):
        self.n = n
        self.m_ratio = m_ratio
        super().__init__(f"sampling ratio M={m_ratio} does not divide N={n}")


class NonUnitaryReducedError(UsageError):
    pass


class OperatorConsistencyError(NumericalError):
    """Matrix action and fold/replicate action of an operator disagree."""


# --- wiener / priors ------------------------------------------------------

class SingularGramError(NumericalError):
    """A gram factor that must be inverted is (numerically) singular."""

    def __init__(self, factor: str, condition: float, method: Optional[str] = None):
        self.factor = factor
        self.condition = condition
        self.method = method
        prefix = f"[{method}] " if method else ""
        super().__init__(
            f"{prefix}{factor} is singular (condition number {condition:.3e}); "
            f"consider a positive regularization (ε·I added to the gram)"
        )

    def tagged(self, method: str) -> "SingularGramError":
        """Same error, labelled with the recovery method that raised it."""
        return type(self)(self.factor, self.condition, method=method)


class SingularCrossGramError(SingularGramError):
    """S*A is not invertible: the sampling operator misses the subspace."""


class ZeroDenominatorError(NumericalError):
    def __init__(self, index: int, what: str = "denominator"):
        self.index = index
        super().__init__(f"{what} vanishes at graph frequency index {index}")


# --- bench / cli ----------------------------------------------------------

class UnknownMethodError(UsageError):
    pass


class AllTrialsFailedError(NumericalError):
    def __init__(self, method: str, cell: str, trials: int):
        self.method = method
        self.cell = cell
        self.trials = trials
        super().__init__(f"method '{method}' failed on all {trials} trials of cell {cell}")
