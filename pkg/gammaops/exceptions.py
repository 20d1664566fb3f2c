"""
Error hierarchy for gammaops.

Library code raises these; the CLI maps each one to its process exit code.
"""


class GammaOpsError(Exception):
    """Base class for every error raised by the package."""
    exit_code = 1


class ParameterConstraintError(GammaOpsError, ValueError):
    """Operator parameters (n, k, r) or a derived order limit are invalid."""
    exit_code = 3


class MomentUndefinedError(GammaOpsError):
    """Requested moment order exceeds the order for which the integral converges."""
    exit_code = 3


class DomainError(GammaOpsError, ValueError):
    """An evaluation point lies outside (0, inf)."""
    exit_code = 3


class GrowthViolationError(GammaOpsError):
    """Declared growth of the integrand is too large for the operator to converge."""
    exit_code = 3


class MissingDerivativeError(GammaOpsError):
    """A TestFunction does not carry the analytic derivative that was asked for."""
    exit_code = 3


class MissingModulusError(GammaOpsError):
    """A bound check needs an analytic modulus the TestFunction does not provide."""
    exit_code = 3


class LadderShapeError(GammaOpsError, ValueError):
    """The n-ladder is not an ascending doubling ladder."""
    exit_code = 3


class UnknownFunctionError(GammaOpsError, KeyError):
    """Function id does not name a builtin TestFunction."""
    exit_code = 2

    def __str__(self):
        return str(self.args[0]) if self.args else ''


class QuadratureError(GammaOpsError):
    """Quadrature did not reach tolerance within the node budget."""
    exit_code = 4


class BoundViolationError(GammaOpsError):
    """An asserted error bound failed beyond the numeric margin."""
    exit_code = 5
