"""Exception types shared across the package."""


class DomainMinerError(Exception):
    """Base class for all package errors."""


class ArityError(DomainMinerError, ValueError):
    """Shapes of two related objects do not match."""


class MatrixParseError(DomainMinerError, ValueError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class SizeLimitError(DomainMinerError, ValueError):
    """Input exceeds the bound of an exponential-time routine."""


class EncodingConfigError(DomainMinerError, ValueError):
    pass


class IntegrityError(DomainMinerError, RuntimeError):
    """A model or decoded policy failed post-verification."""


class SolverError(DomainMinerError, RuntimeError):
    pass


class InfeasibleError(DomainMinerError):
    """Hard clauses are unsatisfiable for the given class budget."""

    def __init__(self, m):
        self.m = m
        super().__init__(
            f"no instantiation has at most {m} classes; retry with m={2 * m}"
        )


class SolveTimeout(DomainMinerError):
    def __init__(self, timeout, bound=None):
        self.timeout = timeout
        self.bound = bound
        super().__init__(f"solver exceeded {timeout}s (best bound: {bound})")
