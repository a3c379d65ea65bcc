"""Exception types shared across the package.

Every error that corresponds to a violated precondition derives from
:class:`PreconditionError`, so callers (and the CLI) can distinguish
"you asked a malformed question" from "the computation itself failed".
"""


class DynatomicError(Exception):
    """Base class for all package-specific errors."""


class PreconditionError(DynatomicError, ValueError):
    """An operation was called with inputs outside its contract."""


class NotPeriodic(PreconditionError):
    """Angle is not periodic under t -> d*t (denominator shares a factor with d)."""


class ZeroAngle(PreconditionError):
    """The angle 0 has no kneading sequence / itinerary partition."""


class PeriodOne(PreconditionError):
    """Classification requires period >= 2."""


class NotMaximal(PreconditionError):
    """Angle is not the maximal member of its orbit."""


class NotExactPeriod(PreconditionError):
    """Word/angle does not have the exact period required."""


class SpecialAngle(PreconditionError):
    """Angle is the special angle 1 - 1/(d^n - 1); the requested operation excludes it."""


class NotSatelliteCandidate(PreconditionError):
    """Operation requires a satellite-candidate classification."""


class BoundaryHit(DynatomicError):
    """An iterate landed exactly on an itinerary-partition boundary."""


class PeriodDrop(DynatomicError):
    """A derived angle unexpectedly fails to have exact period n."""


class BudgetExceeded(PreconditionError):
    """Requested computation exceeds the configured enumeration/exactness budget."""


class MultiplierMismatch(PreconditionError):
    """Multiplier at the supplied point is not (close to) the required root of unity."""


class MultiplierOne(PreconditionError):
    """Orbit multiplier is (numerically) 1, making the weight system singular."""


class NotParabolic(PreconditionError):
    """Point/parameter does not satisfy the parabolic condition required."""


class ConvergenceError(DynatomicError):
    """An iterative numerical routine failed to converge."""


class NewtonDivergence(ConvergenceError):
    """Newton continuation failed even after exhausting step subdivision."""


class Bifurcation(DynatomicError):
    """A dynamical ray ran into an iterated preimage of the critical point."""

    def __init__(self, message, point=None, potential=None):
        super().__init__(message)
        self.point = point
        self.potential = potential


class NearCriticalValue(PreconditionError):
    """Evaluation point too close to the critical value (preimages collide)."""


class DoublePoleAtZero(PreconditionError):
    """Push-forward of a double pole at the critical point is undefined here."""


class DoublePoleInRegion(PreconditionError):
    """Norm integral diverges: a double pole lies inside the integration region."""


class PoleCollision(DynatomicError):
    """Two poles of a quadratic differential (nearly) collide."""


class RegionNotCompactlyContained(PreconditionError):
    """f^{-1}(V) is not compactly contained in V for the supplied radius."""


class ClusterAmbiguous(DynatomicError):
    """Orbit-splitting clusters cannot be separated at the supplied radius."""


class UnmatchedRoot(DynatomicError):
    """A ray landing point or continued root could not be matched unambiguously."""


class LabelConflict(DynatomicError):
    """Two rays assigned inconsistent itineraries to the same periodic point."""


class TrackingAmbiguous(DynatomicError):
    """Continuation step could not be matched to unique nearest roots."""


class InternalInvariant(DynatomicError):
    """A property guaranteed by theory failed at runtime; indicates a bug."""
