"""Trim a star fan to a convex polytope that is still point free.

The convex hull of the fan's vertices may swallow obstacle points hiding in
its non-convex notches.  Every hull facet spans a simplex with the apex;
moving the facet plane inward to the deepest fan vertex inside that simplex
cuts those notches off while provably keeping the apex.  A final recheck
against the full cloud tightens planes onto any survivor (counted in
``safety_repairs``, zero in every scenario we generate), so emptiness of
the result does not rest on the geometric argument alone.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from time import perf_counter

import numpy as np

from . import kernels
from .errors import InvalidRotation, NotInterior
from .flip import QueryFrame
from .geometry import (HalfSpaceSystem, PointCloud, axis_box_system,
                       convex_hull, enumerate_vertices, polytope_volume,
                       remove_redundant, scaled_tol)
from .star import StarPolytope, bary_tol, build_star

logger = logging.getLogger(__name__)


@dataclass
class FreePolytope:
    """Bounded convex polytope guaranteed free of cloud points.

    ``system`` has no redundant rows; ``vertices`` are its vertices;
    ``interior`` is the query it was grown from.
    """

    system: HalfSpaceSystem
    vertices: np.ndarray
    interior: np.ndarray
    volume: float
    hyperplane_count: int
    safety_repairs: int = 0

    @property
    def dim(self) -> int:
        return int(self.system.dim)


@dataclass
class PipelineStats:
    """Wall-clock breakdown of one polytope generation."""

    star_build_ms: float
    convexify_ms: float
    total_ms: float
    safety_repairs: int


def modify_to_convex(star: StarPolytope, tol: float | None = None) -> HalfSpaceSystem:
    """Per-facet inward push of the hull of the star's vertices.

    For each hull facet, the candidate vertices are the star vertices
    inside the closed simplex spanned by the facet and the apex; the facet
    plane moves to the candidate farthest from it (ties keep the lowest
    vertex index; a facet with no candidate beyond its own vertices stays
    put).  One output row per hull facet, same order.
    """
    hull = convex_hull(star.vertices)
    if tol is None:
        tol = scaled_tol(star.vertices)
    new_b, _ = kernels.push_facets(hull.normals, hull.offsets,
                                   hull.facet_vertices, star.apex,
                                   star.vertices, bary_tol(star, tol))
    return HalfSpaceSystem(hull.normals, new_b)


def _recheck_emptiness(system: HalfSpaceSystem, cloud: PointCloud, query,
                       tol: float) -> tuple[HalfSpaceSystem, int]:
    """Tighten planes until no cloud point is strictly interior.

    Each round picks one violating point and moves its smallest-slack row
    (preferring rows that keep the query strictly inside) onto the point.
    Tightening only shrinks the polytope, so the loop terminates.
    """
    A = system.A.copy()
    b = system.b.copy()
    pts = cloud.points
    repairs = 0
    while True:
        slack_min = kernels.min_slack(A, b, pts)
        violating = np.nonzero(slack_min > tol)[0]
        if violating.size == 0:
            break
        p = pts[violating[0]]
        slack = b - A @ p
        for row in np.argsort(slack):
            if A[row] @ (p - query) > tol:
                b[row] = float(A[row] @ p)
                repairs += 1
                break
        else:
            raise NotInterior(
                "safety repair cannot separate a cloud point from the query")
    if repairs:
        system = HalfSpaceSystem(A, b)
    return system, repairs


def run_pipeline(cloud: PointCloud, frame: QueryFrame, *,
                 collision_tol: float | None = None,
                 face_grid: int = 8, edge_samples: int = 16,
                 recheck_tol: float | None = None):
    """Full generation: star fan, convex trim, reduction, verification.

    Returns (polytope, stats, star).  The workspace box rows (when the
    frame has a bbox) are appended after the per-facet push, then a single
    redundancy removal runs over the union.
    """
    t0 = perf_counter()
    star = build_star(cloud, frame, face_grid=face_grid,
                      edge_samples=edge_samples, collision_tol=collision_tol)
    t1 = perf_counter()

    system = modify_to_convex(star)
    if frame.bbox is not None:
        system = system.stacked(axis_box_system(*frame.bbox))
    q = frame.query
    system = remove_redundant(system, q)

    repairs = 0
    if len(cloud):
        if recheck_tol is None:
            recheck_tol = scaled_tol(cloud.points)
        system, repairs = _recheck_emptiness(system, cloud, q, recheck_tol)
        if repairs:
            logger.warning("emptiness recheck tightened %d plane(s)", repairs)
            system = remove_redundant(system, q)

    vertices = enumerate_vertices(system, q)
    volume = polytope_volume(vertices)
    t2 = perf_counter()

    poly = FreePolytope(system=system, vertices=vertices, interior=q.copy(),
                        volume=volume, hyperplane_count=system.nrows,
                        safety_repairs=repairs)
    stats = PipelineStats(star_build_ms=(t1 - t0) * 1e3,
                          convexify_ms=(t2 - t1) * 1e3,
                          total_ms=(t2 - t0) * 1e3,
                          safety_repairs=repairs)
    return poly, stats, star


def generate_free_polytope(cloud: PointCloud, frame: QueryFrame, **kwargs) -> FreePolytope:
    """Convenience wrapper around run_pipeline returning just the polytope."""
    poly, _, _ = run_pipeline(cloud, frame, **kwargs)
    return poly


def transform_polytope(poly: FreePolytope, rotation, translation) -> FreePolytope:
    """Rigid motion x -> R x + t of a polytope.

    Normals rotate, offsets shift by the rotated-normal component of t,
    vertices and interior map directly; volume is invariant.  Raises
    InvalidRotation unless R is orthonormal (within 1e-9).
    """
    R = np.asarray(rotation, dtype=float)
    t = np.asarray(translation, dtype=float).reshape(-1)
    d = poly.dim
    if R.shape != (d, d):
        raise InvalidRotation(f"rotation must be {d}x{d}, got {R.shape}")
    if t.shape[0] != d:
        raise ValueError(f"translation must have dim {d}, got {t.shape[0]}")
    if np.abs(R.T @ R - np.eye(d)).max() > 1e-9:
        raise InvalidRotation("matrix is not orthonormal")
    A = poly.system.A @ R.T
    b = poly.system.b + A @ t
    return FreePolytope(system=HalfSpaceSystem(A, b),
                        vertices=poly.vertices @ R.T + t,
                        interior=R @ poly.interior + t,
                        volume=poly.volume,
                        hyperplane_count=poly.hyperplane_count,
                        safety_repairs=poly.safety_repairs)
