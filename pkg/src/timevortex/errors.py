"""Exception types. All derive from ``ValueError`` so callers can catch broadly."""


class TimeVortexError(ValueError):
    pass


class DegenerateBasis(TimeVortexError):
    pass


class NotSuperlattice(TimeVortexError):
    pass


class InvalidVortexCount(TimeVortexError):
    pass


class NotInEvenComponent(TimeVortexError):
    pass


class NotDetectorDisplacement(TimeVortexError):
    pass


class RadiusExceeded(TimeVortexError):
    pass


class TooLarge(TimeVortexError):
    pass


class InvalidEmbedding(TimeVortexError):
    pass


class InvalidProbability(TimeVortexError):
    pass


class UndecomposableHyperedge(TimeVortexError):
    pass


class OddDefectCount(TimeVortexError):
    pass


class TooManyDefects(TimeVortexError):
    pass


class WindowTooShort(TimeVortexError):
    pass


class InvalidParams(TimeVortexError):
    pass
