"""Exception hierarchy shared by every module of the package."""


class SturmSpecError(Exception):
    """Base class for all errors raised by sturmspec."""


class ValidationError(SturmSpecError, ValueError):
    """A coefficient or boundary constant violates a model assumption.

    ``function`` names the offending coefficient (``"p"``, ``"q"``, ...) and
    ``x`` the sample where the violation was seen, when applicable.
    """

    def __init__(self, message, *, function=None, x=None):
        super().__init__(message)
        self.function = function
        self.x = x


class DomainError(SturmSpecError, ValueError):
    """An argument lies outside the domain of an operation."""


class IntegrationError(SturmSpecError, RuntimeError):
    """The initial value integration failed before reaching the endpoint."""

    def __init__(self, message, *, reach=None):
        super().__init__(message)
        self.reach = reach


class EvaluationError(SturmSpecError, ArithmeticError):
    """A coefficient or the state produced NaN or overflowed."""


class PoleError(SturmSpecError, ZeroDivisionError):
    """Evaluation at a pole; ``which`` is ``"lambda=0"`` or ``"f(L)=0"``."""

    def __init__(self, message, *, which):
        super().__init__(message)
        self.which = which


class SearchError(SturmSpecError, RuntimeError):
    """A bracket could not be established or a certificate failed."""

    def __init__(self, message, *, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class RegimeError(SturmSpecError, ValueError):
    """The operation is undefined for the given parameter regime."""


class SeriesError(SturmSpecError, ArithmeticError):
    """A series failed to converge within its term budget."""


class TransformError(SturmSpecError, ValueError):
    """A transformation is undefined (e.g. vanishing ground function)."""


class ConfigError(SturmSpecError, ValueError):
    """Malformed configuration; ``path`` locates the offending key."""

    def __init__(self, message, *, path=None, line=None):
        where = []
        if path:
            where.append(f"at {path}")
        if line is not None:
            where.append(f"line {line}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.path = path
        self.line = line
