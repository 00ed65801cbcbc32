"""Exception hierarchy.

Every error raised by the library derives from :class:`GeometryError` so the
CLI can map the whole family onto exit code 3 in one place.
"""


class GeometryError(Exception):
    """Base class for geometric precondition failures."""


class DegenerateTangentPlane(GeometryError):
    pass


class NormalSpaceNotLorentzian(GeometryError):
    pass


class NotSpacelike(GeometryError):
    pass


class OutOfDomain(GeometryError):
    pass


class InsufficientSamples(GeometryError):
    pass


class InflectionPoint(GeometryError):
    """Raised where the acceleration of a profile curve is (numerically) null."""


class StencilOutOfDomain(GeometryError):
    pass


class MinimalPoint(GeometryError):
    pass


class LightlikeMeanCurvature(GeometryError):
    pass


class UmbilicalPoint(GeometryError):
    pass


class AmbientMismatch(GeometryError):
    pass


class MixedRegime(GeometryError):
    """The projection curvature is zero on part of the grid only."""

    def __init__(self, message, detail=None):
        super().__init__(message)
        self.detail = detail or {}


class NotHyperplanar(GeometryError):
    pass


class PreconditionViolation(GeometryError):
    pass


class NoAdmissibleRoot(GeometryError):
    pass


class DegenerateAcceleration(GeometryError):
    pass


class BlowUp(GeometryError):
    pass
