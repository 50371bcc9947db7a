"""Exception hierarchy shared across the compiler."""


class SurfcError(Exception):
    """Base class for all errors raised by this package."""


class QasmError(SurfcError):
    """Malformed QASM input; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class CircuitError(SurfcError):
    """Semantically invalid circuit (bad qubit index, equal operands, ...)."""


class InfeasibleError(SurfcError):
    """Requested configuration cannot be realized (chip too small, bad shape, ...)."""


class SchedulingError(SurfcError):
    """A gate cannot be scheduled on the given chip/mapping."""


class BudgetExceededError(SurfcError):
    """Oracle refused an input larger than its budget (distinct from 'no answer')."""
