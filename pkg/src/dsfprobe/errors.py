"""Exception types raised by the numerical routines."""


class DsfProbeError(Exception):
    """Base class for all package-specific failures."""


class NonConvergence(DsfProbeError):
    """Newton iteration for the equations of state failed to converge."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class QuadratureNotConverged(DsfProbeError):
    """Doubling the quadrature nodes failed to stabilize the result."""


class PoleSingular(DsfProbeError):
    """Response denominator underflowed; the broadening is too small for the grid."""


class RootBracketFailure(DsfProbeError):
    """Dispersion equation changed sign more than once on the scan grid."""


class NoModeAtFrequency(DsfProbeError):
    """Requested frequency exceeds the maximum unmerged collective-mode frequency."""


class StepTooLarge(DsfProbeError):
    """Integrator step violates the step-size guard."""


class ConfigError(DsfProbeError):
    """Run configuration is missing, malformed, or inconsistent."""
