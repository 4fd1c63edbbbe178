"""Exception types raised by rspcover."""


class RspCoverError(Exception):
    """Base class for all library errors."""


class InvalidCount(RspCoverError, ValueError):
    pass


class EmptyPointSet(RspCoverError, ValueError):
    pass


class DegenerateInput(RspCoverError, ValueError):
    """Sites do not span 3-space, so no convex-hull Voronoi diagram exists."""


class NoCoverAvailable(RspCoverError, LookupError):
    """No tabulated point count reaches the requested infidelity radius."""


class DomainError(RspCoverError, ValueError):
    pass


class IndexOutOfRange(RspCoverError, IndexError):
    pass
