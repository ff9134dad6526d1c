"""Exception types shared across the package."""


class GraphError(ValueError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class UnknownEndpoint(GraphError):
    pass


class UnknownVertex(GraphError):
    pass


class Disconnected(GraphError):
    pass


class EdgeInForest(GraphError):
    pass


class CrossComponent(GraphError):
    pass


class NotPlanar(GraphError):
    """Raised when an operation needs a planar embedding and none exists."""


class NotAPartition(GraphError):
    pass


class NotThreeConnected(GraphError):
    pass


class NotTwoConnected(GraphError):
    pass


class NoCommonVertex(GraphError):
    pass


class NotFaceAdjacentAnchors(GraphError):
    pass


class OuterFaceForbidden(GraphError):
    pass


class TooLarge(GraphError):
    pass


class UnknownBag(GraphError):
    pass


class NotRooted(GraphError):
    pass


class RootNotOnCycle(GraphError):
    pass


class AmbiguousOrientation(GraphError):
    pass


NotConnected = Disconnected


class SelfPair(GraphError):
    pass


class UnknownPredicate(GraphError):
    pass
