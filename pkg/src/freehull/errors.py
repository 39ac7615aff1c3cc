"""Exception types shared across the package."""


class FreehullError(Exception):
    """Base class for all freehull errors."""


class DegenerateInput(FreehullError):
    """Input points are affinely dependent (or close enough to defeat the
    joggle fallback) for the requested construction."""


class NotInterior(FreehullError):
    """A point that must lie strictly inside a half-space system does not."""


class Unbounded(FreehullError):
    """The feasible set of a half-space system is unbounded."""


class EmptyCloud(FreehullError):
    """An operation that needs at least one point received none."""


class QueryInsideObstacle(FreehullError):
    """The query coordinate coincides with an obstacle sample."""


class DomainError(FreehullError):
    """A point lies outside the domain of the radial inversion."""


class NotWrapped(FreehullError):
    """The point cloud does not surround the query: some open half-space
    through the query contains no cloud points."""


class InfeasibleSpec(FreehullError):
    """A scene spec whose free region (nearly) fills the sampling cube."""


class PathBlocked(FreehullError):
    """A corridor waypoint coincides with an obstacle point."""

    def __init__(self, message, waypoint_index=None):
        super().__init__(message)
        self.waypoint_index = waypoint_index


class CorridorGap(FreehullError):
    """Free space around consecutive waypoints does not overlap enough to
    chain polytopes."""


class ParseError(FreehullError):
    """A cloud, path, polytope or spec file could not be parsed."""


class DimensionMismatch(ParseError):
    """Rows of an input file disagree on dimension."""


class InvalidRotation(FreehullError):
    """A matrix passed as a rotation is not orthonormal."""
