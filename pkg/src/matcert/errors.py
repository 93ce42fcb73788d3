"""Exception hierarchy shared by all matcert modules."""


class MatcertError(Exception):
    """Base class for every error raised by matcert."""


class GuardError(MatcertError, ValueError):
    """A matrix operation was applied outside its dimension guard."""


class DimensionMismatch(GuardError):
    def __init__(self, op, left, right):
        self.op = op
        self.left = left
        self.right = right
        super().__init__(
            f"{op}: dimension mismatch {left[0]}x{left[1]} vs {right[0]}x{right[1]}"
        )


class NonSquareMatrix(GuardError):
    def __init__(self, op, shape):
        self.shape = shape
        super().__init__(f"{op}: expected a square matrix, got {shape[0]}x{shape[1]}")


class NegativeEntry(GuardError):
    def __init__(self, op, index, value):
        self.index = index
        self.value = value
        super().__init__(f"{op}: negative entry {value} at {index}")


class EmptyMatrixSet(GuardError):
    pass


class NonIntegralPolynomial(MatcertError, ValueError):
    pass


class ZeroPolynomial(MatcertError, ValueError):
    pass


class InterpretationError(MatcertError):
    """A term mentions a symbol or variable the interpretation cannot evaluate."""


class BudgetExceeded(MatcertError):
    def __init__(self, requested, budget):
        self.requested = requested
        self.budget = budget
        super().__init__(f"product enumeration needs {requested} products, budget is {budget}")


class InputError(MatcertError):
    """Malformed user input (TRS text, certificate JSON, ill-formed rules).

    ``where`` is a human-readable location: ``line:col`` for TRS text or a
    JSON path such as ``$.interpretation.f.args[0]`` for certificates.
    """

    def __init__(self, message, where=None):
        self.message = message
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)
