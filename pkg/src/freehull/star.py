"""Star-shaped free region around a query point.

Flipping the cloud turns the near boundary of free space into the far
boundary of the flipped cloud, so the convex hull of the flipped points
selects exactly the cloud points visible from the query.  Joining every
hull facet (mapped back to its source points) with the query yields a fan
of simplices whose union contains the query, is star shaped around it, and
touches obstacle points only on its boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegenerateInput, NotWrapped
from .flip import QueryFrame, flip
from .geometry import PointCloud, convex_hull, coord_scale, scaled_tol


@dataclass
class StarPolytope:
    """Simplex fan around the apex.

    Vertices carry the exact coordinates of their source points (no
    numeric back-mapping); ``vertex_source`` is the row in the input cloud,
    or -1 for injected workspace-boundary samples (also flagged in
    ``injected``).  ``facets`` indexes into ``vertices``; each facet plus
    the apex spans one simplex of the fan.
    """

    apex: np.ndarray
    vertices: np.ndarray
    vertex_source: np.ndarray
    facets: np.ndarray
    injected: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.vertices.shape[1])

    @property
    def vertex_count(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def facet_count(self) -> int:
        return int(self.facets.shape[0])

    def reach(self) -> float:
        """Largest apex-to-vertex distance (the fan's outer radius)."""
        return float(np.linalg.norm(self.vertices - self.apex, axis=1).max())


def _box_surface_points(lo, hi, face_grid: int, edge_samples: int) -> np.ndarray:
    """Sample points on the surface of the box [lo, hi].

    2D: edge_samples points along each of the 4 edges.  3D: a face_grid x
    face_grid lattice on each of the 6 faces.  Corners are shared between
    faces; duplicates are removed.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    d = lo.shape[0]
    pts = []
    if d == 2:
        xs = np.linspace(lo[0], hi[0], edge_samples)
        ys = np.linspace(lo[1], hi[1], edge_samples)
        for y in (lo[1], hi[1]):
            pts.append(np.column_stack([xs, np.full_like(xs, y)]))
        for x in (lo[0], hi[0]):
            pts.append(np.column_stack([np.full_like(ys, x), ys]))
    else:
        for axis in range(3):
            others = [k for k in range(3) if k != axis]
            u = np.linspace(lo[others[0]], hi[others[0]], face_grid)
            v = np.linspace(lo[others[1]], hi[others[1]], face_grid)
            uu, vv = np.meshgrid(u, v)
            for w in (lo[axis], hi[axis]):
                face = np.empty((face_grid * face_grid, 3))
                face[:, axis] = w
                face[:, others[0]] = uu.ravel()
                face[:, others[1]] = vv.ravel()
                pts.append(face)
    out = np.vstack(pts)
    return np.unique(out, axis=0)


def build_star(cloud: PointCloud, frame: QueryFrame, *,
               face_grid: int = 8, edge_samples: int = 16,
               collision_tol: float | None = None) -> StarPolytope:
    """Flip, take the hull, map hull facets back to their source points.

    When the frame has a bbox, its surface samples are injected into the
    cloud first so the fan cannot poke through the workspace boundary.
    Raises NotWrapped when some open half-space through the query contains
    no points (the fan would not surround the query); the caller decides
    whether to add a bbox or reject the query.
    """
    base = cloud.points
    n_base = base.shape[0]
    if frame.bbox is not None:
        injected = _box_surface_points(frame.bbox[0], frame.bbox[1],
                                       face_grid, edge_samples)
        all_pts = np.vstack([base, injected]) if n_base else injected
    else:
        all_pts = base
    combined = PointCloud(all_pts)
    flipped = flip(combined, frame, collision_tol)
    if len(flipped) < combined.dim + 1:
        raise DegenerateInput(
            f"only {len(flipped)} point(s) inside the inversion domain; "
            "increase the radius")

    centered = flipped.points - frame.query
    hull = convex_hull(centered)
    if hull.offsets.min() <= scaled_tol(coord_scale(centered)):
        raise NotWrapped(
            "the cloud does not surround the query: an open half-space "
            "through the query contains no points")

    hv = hull.vertex_indices                      # sorted
    src = flipped.source_index[hv]                # rows into all_pts
    vertices = all_pts[src].copy()
    injected_mask = src >= n_base
    vertex_source = np.where(injected_mask, -1, src).astype(np.int64)
    facets = np.searchsorted(hv, hull.facet_vertices).astype(np.int64)
    return StarPolytope(apex=frame.query.copy(),
                        vertices=vertices,
                        vertex_source=vertex_source,
                        facets=facets,
                        injected=injected_mask)


def bary_tol(star: StarPolytope, tol: float) -> float:
    """Convert a Euclidean tolerance to a barycentric one.

    Barycentric coordinates of the fan change by about delta / reach when a
    point moves by delta, with reach the fan's outer radius (floored at 1).
    """
    if tol == 0.0:
        return 0.0
    return tol / max(1.0, star.reach())


def star_contains_many(star: StarPolytope, points, tol: float = 0.0, hints=None):
    """Vectorized membership in the fan.

    tol is Euclidean: positive widens every simplex (boundary counts as
    inside), negative tests strict interiority by that margin.  Returns
    (inside, simplex_index); feeding simplex_index back as ``hints`` makes
    repeated queries along the same ray O(1).
    """
    X = np.ascontiguousarray(points, dtype=float)
    return kernels.points_in_star(star.apex, star.vertices, star.facets,
                                  X, bary_tol(star, tol), hints)


def star_contains(star: StarPolytope, x, tol: float = 0.0) -> bool:
    """Membership of a single point in the fan (see star_contains_many)."""
    x = np.asarray(x, dtype=float).reshape(1, -1)
    if x.shape[1] != star.dim:
        raise ValueError(f"point dim {x.shape[1]} != star dim {star.dim}")
    inside, _ = star_contains_many(star, x, tol)
    return bool(inside[0])
