"""Exception types shared across the package."""


class NearquadError(Exception):
    """Base class for all nearquad-specific errors."""


class SingularConfigurationError(NearquadError, ValueError):
    """Field point lies on the integration element (|y| below threshold).

    The on-element case requires Cauchy principal value / finite-part
    treatment and is rejected by this library.
    """


class OverflowRiskError(NearquadError, ValueError):
    """Moment order beyond the double-precision stability range (n > 32)."""


class ContractViolationError(NearquadError, ValueError):
    """Malformed input: dimension mismatch, non-finite entries, bad spec."""


class IterationFailureError(NearquadError, RuntimeError):
    """Newton iteration failed to converge; indicates a defect."""


class EvaluationError(NearquadError, ValueError):
    """Integrand returned a non-finite value at a quadrature node."""


class ValidationFailureError(NearquadError):
    """Closed-form moment values disagree with the reference integrator."""
