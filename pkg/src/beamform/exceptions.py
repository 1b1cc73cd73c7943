"""Exception types raised by the beamform package."""


class BeamformError(Exception):
    """Base class for package-specific errors."""


class BudgetExceededError(BeamformError):
    """A search would exceed its configured evaluation ceiling."""


class SingularCombinerError(BeamformError):
    """The combiner's noise covariance is singular (coinciding columns)."""


class DegenerateNeighborhoodError(BeamformError):
    """Every candidate move clamps onto the input or collides with another column."""


class InfeasibleCodebookError(BeamformError):
    """No valid column selection exists for the requested codebook."""
