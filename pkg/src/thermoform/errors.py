"""Exception types shared across the package."""


class ThermoformError(Exception):
    """Base class for all package-specific errors."""


class TupleFormatError(ThermoformError):
    """Malformed tuple input (file syntax, shapes, policy conflicts)."""


class BudgetExceededError(ThermoformError):
    """An enumeration or dimension guard would be exceeded.

    Carries the offending requested amount and the cap so callers can
    report actionable diagnostics.
    """

    def __init__(self, message, requested=None, cap=None):
        super().__init__(message)
        self.requested = requested
        self.cap = cap


class NotConvergedError(ThermoformError):
    """An iterative solver hit its iteration cap before meeting tolerance."""

    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class DegenerateEigenmatrixError(ThermoformError):
    """The Perron eigenmatrix is not positive definite.

    This is the numeric signal that the tuple is reducible (or close
    enough that the equilibrium data are meaningless).
    """

    def __init__(self, message, eigenmatrix=None, min_eigenvalue=None):
        super().__init__(message)
        self.eigenmatrix = eigenmatrix
        self.min_eigenvalue = min_eigenvalue


class UnsupportedPrecisionError(ThermoformError):
    """A check needs pressure values sharper than the available bracket."""


class NoConnectingWordError(ThermoformError):
    """All candidate connecting words give a zero product.

    For an irreducible tuple this cannot happen, so the condition is
    reported as evidence of reducibility.
    """
