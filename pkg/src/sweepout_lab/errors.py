"""Exception hierarchy shared by all modules."""


class SweepoutError(Exception):
    """Base class for every error raised by this package."""


class ChartDegenerate(SweepoutError, ValueError):
    pass


class NoCenter(SweepoutError):
    pass


class UnresolvedZero(SweepoutError):
    pass


class SamplingTooCoarse(SweepoutError):
    pass


class EmptySurface(SweepoutError):
    pass


class SingularOnSeam(SweepoutError):
    pass


class HasBoundary(SweepoutError):
    pass


class NonOrientable(SweepoutError):
    pass


class NotStabilized(SweepoutError):
    pass


class PoleOnSurface(SweepoutError):
    pass


class NotACycle(SweepoutError, ValueError):
    pass


class NoNontrivialCycle(SweepoutError):
    pass


class DiskNotSimplyConnected(SweepoutError, ValueError):
    pass


class StuckNoCycle(SweepoutError):
    pass


class NotSimple(SweepoutError, ValueError):
    pass


class NoAnnulus(SweepoutError):
    pass


class NoSuchComponent(SweepoutError, KeyError):
    pass


class GenusIncreased(SweepoutError, AssertionError):
    pass


class RadiusTooLarge(SweepoutError, ValueError):
    pass


class AreaTooLarge(SweepoutError, ValueError):
    pass


class LoopsIntersect(SweepoutError, ValueError):
    pass


class PoleSearchFailed(SweepoutError):
    pass


class NotInOmegaPsi(SweepoutError, ValueError):
    pass


class TrackingLost(SweepoutError):
    pass
