"""Exception hierarchy shared by all tubeforge modules.

Exit-code mapping used by the CLI:
  2 -- configuration / validation / domain errors
  3 -- numerical non-convergence
  4 -- resource guard tripped
"""


class TubeforgeError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 2


class ConfigError(TubeforgeError):
    """Malformed or inconsistent spray configuration."""

    exit_code = 2


class SprayValidationError(TubeforgeError):
    """A standing model assumption is violated."""

    exit_code = 2


class DomainError(TubeforgeError):
    """Argument outside the mathematical domain of an operation."""

    exit_code = 2


class DivergenceError(DomainError):
    """Total volume of the spray is infinite (sum of ratios^n >= 1)."""


class StripError(DomainError):
    """Inversion abscissa outside the strip of convergence."""


class WindowError(DomainError):
    """Requested truncation exceeds the available search window."""


class PoleProximityError(DomainError):
    """Evaluation point too close to a pole."""


class ConvergenceError(TubeforgeError):
    """An iteration or refinement failed to converge."""

    exit_code = 3


class BoundaryProximityError(ConvergenceError):
    """A winding integral is ambiguous; a zero sits too close to the contour."""


class ResourceLimitError(TubeforgeError):
    """A guard against runaway enumeration or memory use tripped."""

    exit_code = 4
