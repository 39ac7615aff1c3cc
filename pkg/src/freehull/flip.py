"""Radial sphere inversion around a query point.

With the query at the origin, a cloud point p with 0 < |p| < 2R maps to
p * (2R - |p|) / |p|: the direction from the query is preserved while near
and far swap order (the image norm is 2R - |p|).  The map is an involution
on the punctured open ball of radius 2R, so applying it twice returns the
input exactly (up to roundoff).
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, EmptyCloud, QueryInsideObstacle
from .geometry import PointCloud, coord_scale

# A cloud point closer to the query than this (times the coordinate scale)
# means the query sits inside an obstacle.
COLLISION_TOL_REL = 1e-6


@dataclass
class QueryFrame:
    """Query point, inversion radius and optional workspace box.

    When ``bbox`` is given the query must be strictly inside it; the box is
    later injected as boundary samples so the polytope respects it.
    """

    query: np.ndarray
    radius: float
    bbox: tuple[np.ndarray, np.ndarray] | None = None

    def __post_init__(self):
        q = np.ascontiguousarray(self.query, dtype=float).reshape(-1)
        if q.shape[0] not in (2, 3):
            raise ValueError(f"query must have dim 2 or 3, got {q.shape[0]}")
        if not np.isfinite(q).all():
            raise ValueError("query has non-finite coordinates")
        r = float(self.radius)
        if not (np.isfinite(r) and r > 0.0):
            raise ValueError(f"radius must be a positive finite number, got {r}")
        if self.bbox is not None:
            lo = np.asarray(self.bbox[0], dtype=float).reshape(-1)
            hi = np.asarray(self.bbox[1], dtype=float).reshape(-1)
            if lo.shape != q.shape or hi.shape != q.shape:
                raise ValueError("bbox dimension does not match the query")
            if not np.all(lo < hi):
                raise ValueError("bbox must satisfy lo < hi componentwise")
            if not (np.all(q > lo) and np.all(q < hi)):
                raise ValueError("query must be strictly inside the bbox")
            self.bbox = (lo, hi)
        self.query = q
        self.radius = r

    @property
    def dim(self) -> int:
        return int(self.query.shape[0])


@dataclass
class FlippedCloud:
    """Image of a cloud under the inversion, in world coordinates.

    ``source_index[i]`` is the row of the input cloud that produced point i;
    points at distance >= 2R have no image and are counted in
    ``dropped_count``.
    """

    points: np.ndarray
    source_index: np.ndarray
    frame: QueryFrame
    dropped_count: int = 0

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return int(self.points.shape[0])


def flip(cloud: PointCloud, frame: QueryFrame, collision_tol: float | None = None) -> FlippedCloud:
    """Flip every cloud point through the frame's inversion sphere.

    Raises QueryInsideObstacle when any point is within ``collision_tol``
    of the query (default 1e-6 times the coordinate scale).  Points at
    distance >= 2R are outside the domain of the map; they are dropped
    with a warning and tallied in the result.
    """
    if len(cloud) == 0:
        raise EmptyCloud("cannot flip an empty cloud")
    if cloud.dim != frame.dim:
        raise ValueError(f"cloud dim {cloud.dim} != frame dim {frame.dim}")
    centered = cloud.points - frame.query
    norms = np.linalg.norm(centered, axis=1)
    if collision_tol is None:
        collision_tol = COLLISION_TOL_REL * coord_scale(centered)
    if norms.min() < collision_tol:
        hits = int((norms < collision_tol).sum())
        raise QueryInsideObstacle(
            f"{hits} cloud point(s) within {collision_tol:.3g} of the query")
    keep = norms < 2.0 * frame.radius
    dropped = int(len(cloud) - keep.sum())
    if dropped:
        warnings.warn(
            f"{dropped} point(s) at distance >= 2R from the query have no "
            "flipped image and were dropped",
            RuntimeWarning, stacklevel=2)
    flipped = kernels.radial_flip(np.ascontiguousarray(centered[keep]), frame.radius)
    return FlippedCloud(points=flipped + frame.query,
                        source_index=np.nonzero(keep)[0].astype(np.int64),
                        frame=frame,
                        dropped_count=dropped)


def unflip(point, frame: QueryFrame) -> np.ndarray:
    """Pre-image of a single flipped point (the inversion is an involution).

    Raises DomainError unless 0 < |point - query| < 2R.
    """
    p = np.asarray(point, dtype=float).reshape(-1)
    if p.shape[0] != frame.dim:
        raise ValueError(f"point dim {p.shape[0]} != frame dim {frame.dim}")
    centered = p - frame.query
    r = float(np.linalg.norm(centered))
    if not 0.0 < r < 2.0 * frame.radius:
        raise DomainError(
            f"|p - query| = {r:.6g} is outside the open interval (0, {2 * frame.radius:.6g})")
    return frame.query + centered * (2.0 * frame.radius - r) / r


def unflip_many(points, frame: QueryFrame) -> np.ndarray:
    """Vectorized pre-image; every row must satisfy 0 < |p - query| < 2R."""
    P = np.ascontiguousarray(points, dtype=float)
    centered = P - frame.query
    norms = np.linalg.norm(centered, axis=1)
    if norms.size and not ((norms > 0.0).all() and (norms < 2.0 * frame.radius).all()):
        raise DomainError("some points are outside the open domain (0, 2R)")
    return kernels.radial_flip(centered, frame.radius) + frame.query


def auto_radius(cloud: PointCloud, query, gamma: float = 1.0) -> float:
    """Inversion radius gamma times the farthest cloud point distance.

    Any gamma > 0.5 keeps the whole cloud strictly inside the 2R ball;
    the default gamma = 1.0 puts the farthest point on the sphere itself.
    """
    if len(cloud) == 0:
        raise EmptyCloud("auto_radius needs a nonempty cloud")
    if not gamma > 0.5:
        raise ValueError(f"gamma must exceed 0.5, got {gamma}")
    q = np.asarray(query, dtype=float).reshape(-1)
    if q.shape[0] != cloud.dim:
        raise ValueError(f"query dim {q.shape[0]} != cloud dim {cloud.dim}")
    return float(gamma * np.linalg.norm(cloud.points - q, axis=1).max())


def box_corners(lo, hi) -> np.ndarray:
    """All corner points of the axis-aligned box [lo, hi]."""
    lo = np.asarray(lo, dtype=float).reshape(-1)
    hi = np.asarray(hi, dtype=float).reshape(-1)
    return np.array(list(itertools.product(*zip(lo, hi))), dtype=float)


def make_frame(cloud: PointCloud, query, radius: float | None = None,
               gamma: float = 1.0, bbox=None) -> QueryFrame:
    """Build a QueryFrame, deriving the radius when not given.

    The derived radius is gamma times the farthest distance over cloud
    points and bbox corners, so neither real samples nor injected boundary
    samples fall outside the inversion domain.
    """
    q = np.asarray(query, dtype=float).reshape(-1)
    if radius is None:
        if not gamma > 0.5:
            raise ValueError(f"gamma must exceed 0.5, got {gamma}")
        dmax = 0.0
        if len(cloud):
            dmax = float(np.linalg.norm(cloud.points - q, axis=1).max())
        if bbox is not None:
            corners = box_corners(*bbox)
            dmax = max(dmax, float(np.linalg.norm(corners - q, axis=1).max()))
        if dmax <= 0.0:
            raise EmptyCloud("cannot derive a radius from an empty cloud without a bbox")
        radius = gamma * dmax
    return QueryFrame(q, radius, bbox)
