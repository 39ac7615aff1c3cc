"""Shared fixtures and independent oracles.

The oracles deliberately avoid the package's own fast paths: hull edges by
exhaustive side-of-line checks, polytope vertices by solving every
d-subset of planes, volumes by Monte-Carlo rejection against scipy's raw
hull equations, and star membership by per-simplex linear solves.  Slow on
purpose; they are the ground truth the fast code is judged against.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy.spatial import ConvexHull

from freehull import PointCloud, QueryFrame, ReferencePath


def brute_hull_vertices_2d(pts: np.ndarray, tol: float) -> set:
    """Indices of 2D hull vertices by O(N^3) side-of-line tests."""
    n = pts.shape[0]
    verts = set()
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            edge = pts[j] - pts[i]
            normal = np.array([edge[1], -edge[0]])
            side = (pts - pts[i]) @ normal
            if (side <= tol).all() or (side >= -tol).all():
                verts.add(i)
                verts.add(j)
    return verts


def brute_vertices_from_planes(A: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    """Feasible intersection points of every d-subset of planes, deduped."""
    m, d = A.shape
    found = []
    for combo in itertools.combinations(range(m), d):
        M = A[list(combo)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        v = np.linalg.solve(M, b[list(combo)])
        if (A @ v <= b + tol).all():
            found.append(v)
    if not found:
        return np.empty((0, d))
    found = np.asarray(found)
    keep = []
    for i in range(found.shape[0]):
        if all(np.abs(found[i] - found[j]).max() > tol for j in keep):
            keep.append(i)
    return found[keep]


def mc_volume(vertices: np.ndarray, n: int = 10_000_000, seed: int = 0) -> float:
    """Monte-Carlo hull volume using scipy's facet equations directly."""
    hull = ConvexHull(vertices)
    eq = hull.equations
    lo = vertices.min(axis=0)
    hi = vertices.max(axis=0)
    rng = np.random.default_rng(seed)
    hits = 0
    chunk = 1_000_000
    done = 0
    while done < n:
        take = min(chunk, n - done)
        draw = rng.uniform(lo, hi, size=(take, vertices.shape[1]))
        inside = (draw @ eq[:, :-1].T + eq[:, -1] <= 0.0).all(axis=1)
        hits += int(inside.sum())
        done += take
    box = float(np.prod(hi - lo))
    return box * hits / n


def reference_star_membership(star, x: np.ndarray, tol_bary: float) -> bool:
    """Independent fan membership: one linear solve per simplex."""
    y = np.asarray(x, dtype=float) - star.apex
    for facet in star.facets:
        M = (star.vertices[facet] - star.apex).T
        if abs(np.linalg.det(M)) < 1e-14:
            continue
        lam = np.linalg.solve(M, y)
        if (lam >= -tol_bary).all() and lam.sum() <= 1.0 + tol_bary:
            return True
    return False


def sample_in_star(star, n: int, rng: np.random.Generator):
    """Interior samples of the fan, simplex-volume weighted.

    Returns (points, facet_index); Dirichlet barycentric weights are
    strictly positive almost surely, so the points are interior.
    """
    corners = star.vertices[star.facets]
    rel = corners - star.apex
    weights = np.abs(np.linalg.det(rel))
    weights = weights / weights.sum()
    fidx = rng.choice(weights.shape[0], size=n, p=weights)
    lam = rng.dirichlet(np.ones(star.dim + 1), size=n)
    pts = lam[:, :1] * star.apex + np.einsum("nv,nvd->nd", lam[:, 1:], corners[fidx])
    return pts, fidx


def tangent_plane_system(seed: int, dim: int, m: int, radius: float = 0.8,
                         box: float = 1.0):
    """Random planes tangent to a sphere, plus the bounding box rows.

    Every tangent row is non-redundant (it touches the sphere at a point
    no other tangent plane of the same radius cuts off) as long as the
    normals are distinct, which a continuous draw gives almost surely.
    """
    from freehull import HalfSpaceSystem, axis_box_system

    rng = np.random.default_rng(seed)
    normals = rng.normal(size=(m, dim))
    normals /= np.linalg.norm(normals, axis=1)[:, None]
    tangent = HalfSpaceSystem(normals, np.full(m, radius))
    return tangent.stacked(axis_box_system(-box * np.ones(dim), box * np.ones(dim)))


def match_point_sets(P: np.ndarray, Q: np.ndarray, tol: float) -> bool:
    """Same point sets up to permutation, within Chebyshev tol."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    if P.shape != Q.shape:
        return False
    used = np.zeros(Q.shape[0], dtype=bool)
    for p in P:
        dist = np.abs(Q - p).max(axis=1)
        dist[used] = np.inf
        j = int(np.argmin(dist))
        if dist[j] > tol:
            return False
        used[j] = True
    return True


def match_halfspace_sets(A1, b1, A2, b2, tol: float) -> bool:
    """Same half-space rows up to permutation (normals and offsets)."""
    return match_point_sets(np.column_stack([A1, b1]),
                            np.column_stack([A2, b2]), tol)


def random_rotation(seed: int, dim: int) -> np.ndarray:
    """Uniform-ish random proper rotation via QR of a Gaussian matrix."""
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def corridor_fixture(seed: int, n: int = 4000, clearance: float = 2.0,
                     n_wp: int = 20):
    """Cluttered 40x20x5 workspace with a cleared tube around a sine path.

    Waypoints every ~1.9 units keep each one within the previous
    polytope's reach; wider spacing regularly outruns the convex trim.
    """
    rng = np.random.default_rng(seed)
    lo = np.zeros(3)
    hi = np.array([40.0, 20.0, 5.0])
    times = np.linspace(0.0, 9.0, n_wp)
    amplitude = rng.uniform(1.0, 4.0)
    waypoints = np.column_stack([
        np.linspace(2.0, 38.0, n_wp),
        10.0 + amplitude * np.sin(np.linspace(0.0, 2.0 * np.pi, n_wp)),
        np.full(n_wp, 2.5)])
    pts = rng.uniform(lo, hi, size=(n, 3))
    keep = np.full(n, True)
    for a, b in zip(waypoints[:-1], waypoints[1:]):
        seg = b - a
        t = np.clip(((pts - a) @ seg) / (seg @ seg), 0.0, 1.0)
        dist = np.linalg.norm(pts - (a + t[:, None] * seg), axis=1)
        keep &= dist > clearance
    cloud = PointCloud(pts[keep])
    path = ReferencePath(times, waypoints)
    # radius sized for a 6.0 crop halfwidth: the farthest crop-box corner
    # is 6*sqrt(3) from the query, comfortably inside the 2R inversion ball
    frame = QueryFrame(np.array([20.0, 10.0, 2.5]), 6.0 * np.sqrt(3.0), (lo, hi))
    return cloud, path, frame
