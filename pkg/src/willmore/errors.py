"""Error types shared across the package."""


class WillmoreError(Exception):
    """Base class for all library errors."""


class DegeneratePlane(WillmoreError):
    """Sectional curvature requested for linearly dependent vectors."""


class OutOfChart(WillmoreError):
    """Point lies outside the ambient chart domain."""


class BadRadii(WillmoreError):
    """Cutoff radii violate 0 < delta < rho < inj."""


class DegenerateMetric(WillmoreError):
    """Induced metric lost positivity at some node."""


class NonFiniteValue(WillmoreError):
    """NaN or Inf encountered where a finite value is required."""


class NotNormal(WillmoreError):
    """Field failed the normal-bundle membership tolerance."""


class StepTooLarge(WillmoreError):
    """Perturbation step broke the immersion invariant."""


class SingularityDetected(WillmoreError):
    """Flow crossed the discrete singularity threshold."""


class NoConcentration(WillmoreError):
    """No radius in the schedule ever crossed the threshold."""


class WindowEmpty(WillmoreError):
    """No history samples land in the requested rescaled window."""


class VacuousBound(WillmoreError):
    """Lifespan bound has non-positive logarithm argument."""

    def __init__(self, message, log_arg=None):
        super().__init__(message)
        self.log_arg = log_arg


class BadExponents(WillmoreError):
    """Interpolation exponents outside the admissible range."""


class ConfigError(WillmoreError):
    """Run configuration could not be parsed or validated."""
