"""Exception and warning classes shared across ltlab."""


class LtlabError(Exception):
    """Base class for all ltlab errors."""


class DomainError(LtlabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConfigurationError(LtlabError, ValueError):
    """A discretization or algorithm parameter is out of its supported range."""


class DataError(LtlabError, ValueError):
    """Input data is malformed (non-finite entries, wrong shapes)."""


class CapacityError(LtlabError, ValueError):
    """A problem exceeds the desk-scale size limits."""


class ConvergenceError(LtlabError, RuntimeError):
    """An iterative method did not converge.

    Attributes
    ----------
    residuals : sequence of float or None
        Best residual estimates reached before giving up.
    """

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class PivotError(LtlabError, ArithmeticError):
    """Symmetric indefinite factorization hit an exactly singular pivot.

    The shift is (numerically) an eigenvalue; perturb it and count again.
    """


class CompletenessError(LtlabError, ValueError):
    """A spectrum or mode sum is missing contributions it would need."""


class NoBoundError(LtlabError, ValueError):
    """No inequality of the requested form holds for this (gamma, d)."""


class TailError(LtlabError, ValueError):
    """A counting function does not vanish at the end of the integration range."""


class TruncationWarning(UserWarning):
    """Box or grid truncation may affect a result; carries an error estimate."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ResolutionWarning(UserWarning):
    """The grid is too coarse for the requested quantity, or an eigenvalue
    sits too close to a counting threshold to be resolved."""
