"""Exception types raised across the package."""


class MaslovError(Exception):
    """Base class for all library errors."""


class ConfigError(MaslovError):
    """Malformed run configuration or input file."""


class OddDimension(MaslovError):
    """A structure map must act on an even-dimensional space."""


class NotSkewAdjoint(MaslovError):
    """J fails the skew-adjointness check."""


class Singular(MaslovError):
    """A matrix required to be invertible (or positive definite) is not."""


class NotSymplectic(MaslovError):
    """Matrix does not preserve the symplectic form to tolerance."""


class NotNormalized(MaslovError):
    """Operation needs a space whose structure map squares to -I."""


class NotSpAlgebra(MaslovError):
    """Matrix is not in the symplectic Lie algebra to tolerance."""


class NotLagrangian(MaslovError):
    """Frame does not span a Lagrangian subspace."""


class SpaceMismatch(MaslovError):
    """Operands live on different symplectic spaces."""


class RankDeficient(MaslovError):
    """Frame columns are not linearly independent."""


class RankAmbiguous(MaslovError):
    """Singular values straddle the rank tolerance band; refusing to guess."""


class NotComplement(MaslovError):
    """Supplied subspace is not a direct complement."""


class DerivativeUnavailable(MaslovError):
    """Path cannot provide a derivative at the requested time."""


class NoLagrangians(MaslovError):
    """Space has no Lagrangian subspaces (eigenspace dimensions differ)."""


class SubdivisionLimit(MaslovError):
    """Adaptive bisection hit its depth cap without stabilising."""


class GaugeUnstable(MaslovError):
    """Winding count not certified stable under gauge refinement."""


class DegenerateCrossing(MaslovError):
    """Crossing form has a nontrivial kernel; signature count refused."""


class NonIsolatedCrossing(MaslovError):
    """Two crossings closer than the scan resolution."""


class NotALoop(MaslovError):
    """Path endpoints differ; winding numbers need a closed loop."""


class DiscontinuousJunction(MaslovError):
    """Piecewise path segments disagree at a junction time."""


class NotBrakeInvolution(MaslovError):
    """N fails N^2 = I or the anti-symplectic condition."""


class BlockIdentityViolated(MaslovError):
    """A structural block identity failed beyond tolerance."""


class IdentityViolated(MaslovError):
    """An exact integer identity failed; bug or tolerance breakdown."""


class IdentityMismatch(MaslovError):
    """Independent computations of the same quantity disagree."""
