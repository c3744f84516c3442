"""Exception types shared across the package."""


class SpbfgsError(Exception):
    """Base class for errors raised by this package."""


class BadDimensionError(SpbfgsError, ValueError):
    """Array arguments have incompatible or invalid shapes."""


class NonFiniteError(SpbfgsError, ValueError):
    """An input or computed quantity is NaN or infinite where finiteness is required."""


class CurvatureViolationError(SpbfgsError, ValueError):
    """A curvature precondition (s.y > 0, or s.y > -1/beta) does not hold."""


class SingularDenominatorError(SpbfgsError, ZeroDivisionError):
    """A rational coefficient of an update degenerated; surfaced, never regularized."""


class DegenerateInputError(SpbfgsError, ValueError):
    """Inputs are degenerate for the requested construction (zero step, s.y <= 0, non-PD matrix)."""


class SingularSystemError(SpbfgsError, ValueError):
    """A dense linear system arising in the reference QP solve is singular."""


class MissingMetadataError(SpbfgsError, ValueError):
    """The problem lacks metadata (strong convexity constants, Hessian) needed here."""


class EmptyCellError(SpbfgsError, ValueError):
    """A summary was requested over an empty collection of runs."""


class EvaluationBudgetError(SpbfgsError):
    """A noisy function evaluation would exceed the configured budget."""


class ConfigError(SpbfgsError, ValueError):
    """A run-configuration file is malformed or inconsistent."""
