"""
Exception hierarchy for the checker.

Every documented failure of a parser, loader or checker operation is a
subclass of CheckerError, so front ends can map the whole family to one
exit status or protocol error.
"""

from typing import Iterable, Optional


class CheckerError(Exception):
    """Base class for all checker errors."""


class FormulaSyntaxError(CheckerError):
    """Concrete syntax could not be parsed."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class FormulaSemanticError(CheckerError):
    """Formula parses but violates a well-formedness invariant."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{where}{message}")
        self.line = line
        self.column = column


class SpecFileError(CheckerError):
    """Spec file is structurally wrong (e.g. duplicate requirement id)."""

    def __init__(self, message: str, line: int = 0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class SpecParseErrors(CheckerError):
    """Collected errors of one parse() call."""

    def __init__(self, errors: list[CheckerError]):
        super().__init__("; ".join(str(e) for e in errors))
        self.errors = errors


class MacroError(CheckerError):
    """Unknown macro name."""


class QuantifierError(CheckerError):
    """Unbounded, undeclared or unbound quantifier domain/variable."""


class ModelFormatError(CheckerError):
    """Model or strategy file is not valid JSON of the expected shape."""


class ModelValidationError(CheckerError):
    """A model invariant is violated."""

    def __init__(self, invariant: str, subject: str, detail: str = ""):
        message = f"{invariant} violated at {subject}"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)
        self.invariant = invariant
        self.subject = subject


class DeadlockError(ModelValidationError):
    """Pruning left a state with no enabled joint action."""

    def __init__(self, state: str, detail: str = ""):
        super().__init__("seriality", f"state {state!r}", detail)
        self.state = state


class StrategyError(CheckerError):
    """Strategy is unknown, ill-typed or not total on its agent's local states."""


class DispatchError(CheckerError):
    """Formula node handed to a checker that does not evaluate it."""


class BindingError(CheckerError):
    """Formula mentions atoms, features or agents absent from the model."""

    def __init__(self, missing: Iterable[str]):
        self.missing = sorted(set(missing))
        super().__init__(f"unknown names in formula: {', '.join(self.missing)}")


class UnsupportedConstructError(CheckerError):
    """Construct outside the supported fragment for this operator."""


class ConvergenceError(CheckerError):
    """Value iteration did not reach the residual threshold."""

    def __init__(self, residual: float, iterations: int):
        super().__init__(
            f"value iteration did not converge after {iterations} sweeps "
            f"(residual {residual:.3e})"
        )
        self.residual = residual
        self.iterations = iterations


class StateSpaceError(CheckerError):
    """Generated model exceeds the state-space bound."""

    def __init__(self, count: int, limit: int):
        super().__init__(f"state space bound exceeded: {count} > {limit} states")
        self.count = count
        self.limit = limit


class RaggedTableError(CheckerError):
    """Score table rows do not all have the same columns."""

    def __init__(self, row: Optional[str] = None):
        super().__init__(f"ragged score table (row {row!r})" if row else "ragged score table")
        self.row = row
