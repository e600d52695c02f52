"""Exception types shared across the package."""


class DiracJostError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(DiracJostError):
    """Operands or serialized data disagree on matrix dimensions."""


class SingularMatrix(DiracJostError):
    """Inverse requested for a matrix below the invertibility floor."""


class NotHermitian(DiracJostError):
    """Hermitian eigensolver fed a matrix that is not self-adjoint."""


class ParseError(DiracJostError):
    """Malformed profile document."""


class MissingField(DiracJostError):
    """Profile document lacks a required key."""


class IndexOutOfDomain(DiracJostError):
    """Coefficient or solution component requested outside its site range."""


class DomainError(DiracJostError):
    """Spectral-parameter argument outside the admissible region."""


class IllConditionedInterpolation(DiracJostError):
    """Determinant interpolation failed its held-out residual check."""


class DegenerateRoot(DiracJostError):
    """Every determinant derivative vanishes at a root up to full degree."""


class NullVectorNotFound(DiracJostError):
    """No numerical null vector at the requested point; not a true root."""


class NewtonDivergence(DiracJostError):
    """Newton polish failed to converge for a root candidate."""


class TruncationTooSmall(DiracJostError):
    """Finite section is shorter than the perturbation support."""
