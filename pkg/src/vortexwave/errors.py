"""Exception types shared across the package."""


class VortexWaveError(Exception):
    """Base class for package errors."""


class SingularEvaluationError(VortexWaveError):
    """Field evaluated at (or too close to) a singular point."""


class QuadratureToleranceError(VortexWaveError):
    """Adaptive quadrature failed to meet the requested tolerance."""


class SupportError(VortexWaveError):
    """A source violates its required support (strip or fluid interior)."""


class MappingDegeneracyError(VortexWaveError):
    """Flattening Jacobian 1 + eta * a'(Y) lost positivity."""


class StrongTensionError(VortexWaveError):
    """sigma <= c^2/(4 g): the surface multiplier loses positivity."""


class NonConvergenceError(VortexWaveError):
    """Newton/Picard iteration exceeded its iteration budget."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals or {}


class ConfigError(VortexWaveError):
    """Invalid or incomplete run configuration (CLI exit code 2)."""

    def __init__(self, message, path=""):
        super().__init__(message)
        self.path = path
