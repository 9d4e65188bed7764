"""Exception types shared across the geomir package."""


class GeomirError(Exception):
    """Base class for all geomir errors."""


class UndecodableImage(GeomirError):
    pass


class DegenerateImage(GeomirError):
    pass


class EmptyDataset(GeomirError):
    pass


class AllPruned(GeomirError):
    pass


class DimensionMismatch(GeomirError):
    pass


class InvalidNode(GeomirError):
    pass


class ParseError(GeomirError):
    pass


class DuplicateId(GeomirError):
    pass


class UnknownImage(GeomirError):
    pass


class EmptyIndex(GeomirError):
    pass


class UnknownParticle(GeomirError):
    pass


class CannotReleaseRoot(GeomirError):
    pass


class IndexFormatError(GeomirError):
    pass
