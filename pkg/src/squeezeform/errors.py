"""Exception hierarchy.

The four base families map onto the CLI exit codes: validation errors
exit 2, accuracy errors exit 3, pathological-path errors exit 4, and
rank errors exit 5.
"""


class SqueezeformError(Exception):
    """Base class for all library errors."""


class ValidationError(SqueezeformError):
    """Input does not satisfy a documented precondition (exit code 2)."""


class DimensionError(ValidationError):
    """Operands have incompatible or non-square shapes."""


class SymmetryError(ValidationError):
    """A matrix fails its declared structural property (symmetric/Hermitian)."""


class DomainError(ValidationError):
    """Value outside the mathematical domain of the operation."""


class SizeError(ValidationError):
    """Requested problem size exceeds a hard cap."""


class ConstructionError(ValidationError):
    """A constructive recipe produced an object violating its identities."""


class AccuracyError(SqueezeformError):
    """A computation finished but failed its accuracy certificate (exit code 3)."""


class RangeError(AccuracyError):
    """Result overflowed the floating-point range."""


class BranchCutError(AccuracyError):
    """Eigenvalue too close to the principal branch cut."""


class ConsistencyError(AccuracyError):
    """Two internally equivalent formulas disagree beyond tolerance."""


class ConvergenceError(AccuracyError):
    """Iterative refinement (quadrature, cutoff doubling) did not converge."""


class TruncationError(AccuracyError):
    """Truncated-basis representation leaks too much weight."""


class DegenerateGeneratorError(AccuracyError):
    """det G too small for the inverse-generator route; use the general route."""


class DegenerateSqueezeError(AccuracyError):
    """I - R is numerically singular; the position-space image is undefined."""


class SingularDError(AccuracyError):
    """A*conj(A) - B^2 is numerically singular; closed inverse unavailable."""


class ConditioningError(AccuracyError):
    """A similarity transform is too ill-conditioned to trust."""


class DecompositionFailedError(AccuracyError):
    """Numerical Jordan clustering could not reproduce the input matrix."""


class RankError(SqueezeformError):
    """Rank deficiency / degeneracy detected (exit code 5)."""


class RankDeficiencyError(RankError):
    """A family of states is numerically linearly dependent."""


class OverlapDegeneracyError(RankError):
    """The overlap covariance of two states is numerically singular."""


class PathologicalPathError(SqueezeformError):
    """Grid refinement underflowed while tracking a phase path (exit code 4)."""
