"""Exception types used across the package."""


class ProjmiError(Exception):
    """Base class for every package-specific error."""


class ValidationError(ProjmiError):
    """A claimed density matrix violates one of its invariants."""


class NotHermitian(ValidationError):
    """Matrix differs from its conjugate transpose beyond tolerance."""


class NotPositive(ValidationError):
    """Matrix has an eigenvalue below the negative tolerance."""


class TraceNotOne(ValidationError):
    """Matrix trace differs from 1 beyond tolerance."""


class DimensionMismatch(ProjmiError):
    """Operands have incompatible shapes or subsystem dimensions."""


class ZeroVector(ProjmiError):
    """A (near-)zero vector cannot define a projective point."""


class InvalidFrame(ProjmiError):
    """Points of a frame are not mutually orthogonal."""


class BaseMismatch(ProjmiError):
    """Tangent vectors are not based at the expected projective point."""


class UnknownFamily(ProjmiError):
    """State-family spec names a family that does not exist."""


class BadParameter(ProjmiError):
    """A parameter is out of range or malformed."""


class EigenDecompositionFailure(ProjmiError):
    """numpy failed to diagonalize a matrix."""


class NonFiniteSample(ProjmiError):
    """An integrand returned NaN or infinity; skipping would bias the mean."""


class MarginalZeroAnomaly(ProjmiError):
    """Joint density positive where a marginal vanishes; impossible, so a bug."""


class ReconstructionOutOfTolerance(ProjmiError):
    """Moment-based operator reconstruction failed relaxed validation."""


class QuadratureNotConverged(ProjmiError):
    """Adaptive quadrature could not reach the requested accuracy."""
