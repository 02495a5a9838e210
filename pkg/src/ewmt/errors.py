"""Exception types raised by the solver stack."""


class EWMTError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(EWMTError, ValueError):
    """An elliptic function was evaluated at or below its domain floor."""


class AxisSingularity(EWMTError, ValueError):
    """A connection quantity was requested on the axis rho = 0."""


class DegenerateState(EWMTError, ValueError):
    """A curvature formula needs t_s != 0 (or rho_s != 0) and got zero."""


class NewtonDivergence(EWMTError, RuntimeError):
    """The inner Newton solve for the highest derivative did not converge."""


class EllipticityViolation(NewtonDivergence):
    """The factor 1 - 2*beta*f'(beta^2) was not positive during Newton."""


class StepUnderflow(EWMTError, RuntimeError):
    """The adaptive step size fell below the hard minimum."""


class AxisContact(EWMTError, RuntimeError):
    """An arc-length integration produced rho <= 0."""


class InsufficientTail(EWMTError, ValueError):
    """Too few samples in the tail window to fit a decay rate."""


class ConfigError(EWMTError, ValueError):
    """A run configuration failed validation."""
