"""Exception hierarchy shared by every module of the package."""


class BergmanError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BergmanError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class NumericError(BergmanError, ArithmeticError):
    """Floating point evaluation left the representable range.

    ``path`` names the expression-tree node where it happened, e.g.
    ``"sum[1].kernel"``.
    """

    def __init__(self, message, path=""):
        if path:
            message = f"{message} (at {path})"
        super().__init__(message)
        self.path = path


class SingularMatrixError(BergmanError, ArithmeticError):
    """Elimination met a pivot below the singularity threshold."""


class ConvergenceError(BergmanError, ArithmeticError):
    """An iterative method stopped before reaching its tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DominanceError(BergmanError, ArithmeticError):
    """The clustered interpolation matrix is not strictly diagonally dominant."""

    def __init__(self, message, row, margins):
        super().__init__(message)
        self.row = row
        self.margins = margins


class ConfigError(BergmanError, ValueError):
    """A CLI configuration document is malformed."""
