"""Exception hierarchy shared by every lsqbench module."""


class LsqbenchError(Exception):
    """Base class for all errors raised by lsqbench."""


class ShapeError(LsqbenchError, ValueError):
    pass


class NumericalError(LsqbenchError, ArithmeticError):
    """An algorithm failed to produce a trustworthy result.

    ``diagnostics`` carries whatever state the failing routine could report
    (sweep counts, residual sizes, ...).
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class SingularMatrixError(NumericalError):
    pass


class DegenerateInputError(LsqbenchError, ValueError):
    pass


class ConfigError(LsqbenchError, ValueError):
    pass


class ParseError(LsqbenchError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.line = line
        self.column = column


class SchemaError(LsqbenchError, ValueError):
    pass
