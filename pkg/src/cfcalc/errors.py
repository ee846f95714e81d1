"""Exception hierarchy shared by all cfcalc modules."""


class CFError(Exception):
    """Base class for every error raised by cfcalc."""


class DomainError(CFError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class GridError(CFError, ValueError):
    """A grid is too short or does not match the requested interval."""


class ExprSyntaxError(CFError, ValueError):
    """Malformed right-hand-side expression.

    ``offset`` is the byte offset in the source text where parsing failed.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifier(ExprSyntaxError):
    pass


class EvalDomainError(CFError, ArithmeticError):
    """Evaluating an expression produced a non-finite or undefined value."""

    def __init__(self, message: str, node: str):
        super().__init__(f"{message} in '{node}'")
        self.node = node


class SolverError(CFError):
    """Base class for failures of the fractional IVP solver."""


class WindowViolation(SolverError):
    pass


class CompatibilityViolation(SolverError):
    pass


class NonConvergence(SolverError):
    pass


class OracleDivergence(CFError):
    """Panel doubling did not settle before the panel cap."""
