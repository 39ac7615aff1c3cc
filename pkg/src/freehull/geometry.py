"""Convex geometry primitives for 2D and 3D point sets.

Convex hulls are computed with Qhull's quickhull (scipy.spatial.ConvexHull),
retried with an epsilon joggle when the default precision handling gives up.
Vertex enumeration and redundant-row removal for bounded half-space systems
go through polar duality: after shifting a strictly interior point to the
origin, each row a_i.x <= b_i maps to the dual point a_i / b_i.  Convex-hull
vertices of the dual points are exactly the non-redundant rows, and every
dual hull facet with unit normal u and offset c maps back to the primal
vertex u / c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import DegenerateInput, NotInterior, Unbounded

# Package-wide relative tolerance; geometric predicates use
# TOL_REL * max(1, coordinate scale).
TOL_REL = 1e-9


def coord_scale(arr) -> float:
    """Magnitude scale of a coordinate array, floored at 1."""
    a = np.asarray(arr, dtype=float)
    if a.size == 0:
        return 1.0
    return float(max(1.0, np.abs(a).max()))


def scaled_tol(arr_or_scale) -> float:
    """The default tolerance for the given data: TOL_REL * max(1, scale)."""
    if np.isscalar(arr_or_scale):
        return TOL_REL * max(1.0, float(arr_or_scale))
    return TOL_REL * coord_scale(arr_or_scale)


@dataclass
class PointCloud:
    """Unordered obstacle samples; the row index is the point identity."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.ascontiguousarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] not in (2, 3):
            raise ValueError(f"expected an (N, 2) or (N, 3) array, got shape {pts.shape}")
        if pts.size and not np.isfinite(pts).all():
            raise ValueError("cloud contains non-finite coordinates")
        self.points = pts

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return int(self.points.shape[0])


@dataclass
class HalfSpaceSystem:
    """A x <= b with unit-norm rows."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = np.ascontiguousarray(self.A, dtype=float)
        b = np.ascontiguousarray(self.b, dtype=float).reshape(-1)
        if A.ndim != 2 or A.shape[1] not in (2, 3):
            raise ValueError(f"expected an (m, 2) or (m, 3) matrix, got shape {A.shape}")
        if A.shape[0] != b.shape[0]:
            raise ValueError(f"{A.shape[0]} rows in A but {b.shape[0]} offsets")
        if A.size and not (np.isfinite(A).all() and np.isfinite(b).all()):
            raise ValueError("system contains non-finite entries")
        if A.shape[0]:
            norms = np.linalg.norm(A, axis=1)
            if np.abs(norms - 1.0).max() > 1e-9:
                raise ValueError("rows of A must be unit normals; use from_rows() to normalize")
        self.A = A
        self.b = b

    @classmethod
    def from_rows(cls, A, b) -> "HalfSpaceSystem":
        """Build a system from arbitrary-length normals, normalizing rows."""
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float).reshape(-1)
        norms = np.linalg.norm(A, axis=1)
        if (norms == 0).any():
            raise ValueError("zero row in A cannot be normalized")
        return cls(A / norms[:, None], b / norms)

    @property
    def dim(self) -> int:
        return int(self.A.shape[1])

    @property
    def nrows(self) -> int:
        return int(self.A.shape[0])

    def stacked(self, other: "HalfSpaceSystem") -> "HalfSpaceSystem":
        """Concatenate the rows of two systems over the same space."""
        if other.dim != self.dim:
            raise ValueError("cannot stack systems of different dimension")
        return HalfSpaceSystem(np.vstack([self.A, other.A]),
                               np.concatenate([self.b, other.b]))


def axis_box_system(lo, hi) -> HalfSpaceSystem:
    """Half-space system of the axis-aligned box [lo, hi]."""
    lo = np.asarray(lo, dtype=float).reshape(-1)
    hi = np.asarray(hi, dtype=float).reshape(-1)
    if lo.shape != hi.shape or lo.shape[0] not in (2, 3):
        raise ValueError("lo and hi must both have length 2 or 3")
    if not np.all(lo < hi):
        raise ValueError("box must satisfy lo < hi componentwise")
    d = lo.shape[0]
    A = np.vstack([np.eye(d), -np.eye(d)])
    b = np.concatenate([hi, -lo])
    return HalfSpaceSystem(A, b)


@dataclass
class Hull:
    """Convex hull facets of a point set.

    ``facet_vertices`` rows are simplices (edges in 2D, triangles in 3D)
    oriented so the right-hand rule reproduces the outward normal.
    Offsets are recomputed from the original coordinates, so every facet
    plane passes through its own vertices even after a joggled build.
    """

    points: np.ndarray
    vertex_indices: np.ndarray      # sorted unique indices into points
    facet_vertices: np.ndarray      # (F, d) int
    normals: np.ndarray             # (F, d) outward unit normals
    offsets: np.ndarray             # (F,)

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    @property
    def facets(self):
        """List of (vertex index tuple, outward unit normal, offset)."""
        return [(tuple(int(i) for i in fv), self.normals[k], float(self.offsets[k]))
                for k, fv in enumerate(self.facet_vertices)]


def convex_hull(points) -> Hull:
    """Convex hull of 2D/3D points.

    Raises DegenerateInput when the points are affinely dependent within
    the joggle threshold (all collinear / coplanar), or when Qhull cannot
    recover even with joggled input.
    """
    pts = np.ascontiguousarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] not in (2, 3):
        raise ValueError(f"expected an (N, 2) or (N, 3) array, got shape {pts.shape}")
    n, d = pts.shape
    if n < d + 1:
        raise DegenerateInput(f"a {d}D hull needs at least {d + 1} points, got {n}")
    if not np.isfinite(pts).all():
        raise ValueError("points contain non-finite coordinates")

    centered = pts - pts.mean(axis=0)
    sv = np.sqrt(np.clip(np.linalg.eigvalsh(centered.T @ centered), 0.0, None))
    if sv[0] <= TOL_REL * max(1.0, sv[-1]):
        raise DegenerateInput("points are affinely dependent within the joggle threshold")

    try:
        qh = ConvexHull(pts)
    except QhullError:
        try:
            qh = ConvexHull(pts, qhull_options="QJ")
        except QhullError as exc:
            raise DegenerateInput(f"quickhull failed even with joggled input: {exc}") from exc

    normals = qh.equations[:, :d].copy()
    normals /= np.linalg.norm(normals, axis=1)[:, None]
    simplices = qh.simplices.astype(np.int64, copy=True)

    if d == 2:
        t = pts[simplices[:, 1]] - pts[simplices[:, 0]]
        rh = np.stack([t[:, 1], -t[:, 0]], axis=1)
        swap = np.einsum("ij,ij->i", rh, normals) < 0
        simplices[swap] = simplices[swap][:, ::-1]
    else:
        e1 = pts[simplices[:, 1]] - pts[simplices[:, 0]]
        e2 = pts[simplices[:, 2]] - pts[simplices[:, 0]]
        rh = np.cross(e1, e2)
        swap = np.einsum("ij,ij->i", rh, normals) < 0
        simplices[swap] = simplices[swap][:, [0, 2, 1]]

    offsets = np.einsum("fj,fvj->fv", normals, pts[simplices]).max(axis=1)
    return Hull(points=pts,
                vertex_indices=np.unique(qh.vertices).astype(np.int64),
                facet_vertices=simplices,
                normals=normals,
                offsets=offsets)


def contains(system: HalfSpaceSystem, x, tol: float) -> bool:
    """Whether x satisfies every row of the system within tol.

    tol >= 0 counts the boundary as inside; a negative tol tests strict
    interiority by that margin.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != system.dim:
        raise ValueError(f"point has dim {x.shape[0]}, system has dim {system.dim}")
    if system.nrows == 0:
        return True
    return bool(np.all(system.A @ x <= system.b + tol))


def _dual_hull(system: HalfSpaceSystem, interior):
    """Hull of the dual points a_i / (b_i - a_i.q); shared by vertex
    enumeration and redundancy removal."""
    q = np.asarray(interior, dtype=float).reshape(-1)
    if q.shape[0] != system.dim:
        raise ValueError(f"interior point has dim {q.shape[0]}, system has dim {system.dim}")
    margins = system.b - system.A @ q if system.nrows else np.empty(0)
    tol = scaled_tol(max(coord_scale(system.b), coord_scale(q)))
    if system.nrows == 0 or margins.min() <= tol:
        worst = margins.min() if system.nrows else float("-inf")
        raise NotInterior(f"interior point has margin {worst:.3g} <= {tol:.3g}")
    d = system.dim
    if system.nrows < d + 1:
        raise Unbounded(f"{system.nrows} half-spaces cannot bound {d}D space")
    dual = system.A / margins[:, None]
    try:
        dh = convex_hull(dual)
    except DegenerateInput as exc:
        raise Unbounded("half-space normals are degenerate; feasible set is unbounded") from exc
    if dh.offsets.min() <= scaled_tol(dual):
        raise Unbounded("normals do not span all directions; feasible set is unbounded")
    return q, dh


def _dedupe_rows(rows: np.ndarray, tol: float) -> np.ndarray:
    """Drop rows that duplicate an earlier row within tol (Chebyshev)."""
    keep: list[int] = []
    for i in range(rows.shape[0]):
        if all(np.abs(rows[i] - rows[j]).max() > tol for j in keep):
            keep.append(i)
    return rows[keep]


def enumerate_vertices(system: HalfSpaceSystem, interior) -> np.ndarray:
    """All vertices of the bounded polytope {x : A x <= b}.

    ``interior`` must be strictly inside.  Raises NotInterior or Unbounded
    accordingly.  Duplicate vertices produced by the triangulation of
    non-simplicial dual facets are merged.
    """
    q, dh = _dual_hull(system, interior)
    verts = q[None, :] + dh.normals / dh.offsets[:, None]
    return _dedupe_rows(verts, scaled_tol(verts))


def remove_redundant(system: HalfSpaceSystem, interior) -> HalfSpaceSystem:
    """Minimal subsystem with the identical feasible set.

    Keeps exactly the rows whose dual points are hull vertices, in their
    original order.  Re-running on the result is a no-op.
    """
    _, dh = _dual_hull(system, interior)
    keep = np.sort(dh.vertex_indices)
    return HalfSpaceSystem(system.A[keep].copy(), system.b[keep].copy())


def polytope_volume(vertices) -> float:
    """Volume (area in 2D) of the convex hull of the given vertices.

    Sums simplices fanned from the hull-vertex centroid; raises
    DegenerateInput for affinely dependent input (zero volume).
    """
    V = np.ascontiguousarray(vertices, dtype=float)
    hull = convex_hull(V)
    c = V[hull.vertex_indices].mean(axis=0)
    corners = V[hull.facet_vertices] - c
    dets = np.linalg.det(corners)
    return float(np.abs(dets).sum() / math.factorial(hull.dim))
