"""Exception hierarchy."""


class GeometryError(ValueError):
    """Base class for numerical/geometric failures."""


class RegularityError(GeometryError):
    pass


class VanishingCurvature(GeometryError):
    pass


class VanishingTorsion(GeometryError):
    pass


class FrameDegeneracy(GeometryError):
    pass


class GridTooCoarse(GeometryError):
    pass


class BranchUnsupported(GeometryError):
    pass


class VanishingDenominator(GeometryError):
    pass


class NonPlanarBase(GeometryError):
    pass


class SlopeBlowup(GeometryError):
    pass


class ThetaZero(GeometryError):
    pass


class OffSurface(GeometryError):
    pass


class UndefinedTheta(GeometryError):
    pass


class ThetaZeroCrossing(GeometryError):
    pass


class DegenerateSpeed(GeometryError):
    pass


class DegenerateBase(GeometryError):
    pass
