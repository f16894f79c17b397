class GeometryError(Exception):
    """Base class for every error raised by the engines"""


class ShapeMismatch(GeometryError):
    pass


class InvalidDefiningData(GeometryError):
    pass


class InvalidOp(GeometryError):
    pass


class OriginNotInterior(GeometryError):
    pass


class Unbounded(GeometryError):
    pass


class EmptyPolytope(GeometryError):
    pass


class NotFano(GeometryError):
    pass


class NotLogTerminal(GeometryError):
    """Raised when an elementary big cone has a non-positive ell value"""

    def __init__(self, message, cone=None):
        super().__init__(message)
        self.cone = cone


class RayNotOnTrop(GeometryError):
    pass


class UnboundedDirection(GeometryError):
    pass


class WrongShape(GeometryError):
    pass


class NotRankOne(GeometryError):
    pass


class CheckpointCorrupt(GeometryError):
    pass


class SchemaMismatch(GeometryError):
    pass


class RealizationError(GeometryError):
    pass


class ParseError(GeometryError):
    pass
