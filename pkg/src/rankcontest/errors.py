"""Exception types shared across the package."""


class ContestError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ContestError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class MechanismError(ContestError, ValueError):
    """A reward schedule violates the monotone-mechanism conditions.

    ``clause`` names the violated condition: "size" (fewer than two
    ranks), "monotonicity" (rewards increase somewhere), or "strictness"
    (all rewards equal, so rank never matters).
    """

    def __init__(self, clause: str, message: str):
        super().__init__(message)
        self.clause = clause


class StateError(ContestError, RuntimeError):
    """The operation is undefined for the solution's regime, e.g. CDF
    queries against a no-entry equilibrium."""


class ConvergenceError(ContestError, ArithmeticError):
    """An iterative solver exhausted its iteration budget."""


class QuadratureError(ConvergenceError):
    """Adaptive quadrature stopped refining before reaching tolerance.

    ``estimate`` holds the last successive-difference error estimate so
    callers can decide whether the partial result is usable.
    """

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


class CostParseError(ContestError, ValueError):
    """A cost specification string failed to parse.

    ``offset`` is the character position where parsing failed.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(message)
        self.offset = offset
