"""Pure numpy implementations of the hot kernels.

``freehull.kernels`` prefers the compiled extension and falls back to this
module, so every function here must match ``_kernels.pyx`` in semantics:
same tie breaking, same tolerance conventions, same return types.  The
barycentric machinery mirrors the compiled arithmetic operation for
operation (adjugate inverses, fixed ascending accumulation) so membership
decisions -- and hence the generated polytopes -- are identical whichever
implementation is active; only the dgemm-based ``min_slack`` may differ in
the last bit.
"""

from __future__ import annotations

import numpy as np

# Relative determinant threshold below which an apex simplex is treated as
# flat; flat simplices contain nothing and push no plane.
DET_REL_TOL = 1e-12


def radial_flip(centered: np.ndarray, radius: float) -> np.ndarray:
    """Map query-centered points through the inversion x -> x*(2R-|x|)/|x|.

    Near and far swap order (the image norm is 2R - |x|) while directions
    are preserved.  The map is an involution on 0 < |x| < 2R, so it is its
    own inverse; callers guarantee the domain.
    """
    x = np.asarray(centered, dtype=np.float64)
    sq = x[:, 0] * x[:, 0]
    for k in range(1, x.shape[1]):
        sq = sq + x[:, k] * x[:, k]
    norms = np.sqrt(sq)
    return x * ((2.0 * radius - norms) / norms)[:, None]


def min_slack(A: np.ndarray, b: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Per point, the smallest slack b_i - a_i.x over all rows.

    A point is inside every half-space exactly when its min slack is >= 0,
    and strictly interior when it exceeds the caller's tolerance.
    """
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    X = np.atleast_2d(np.asarray(points, dtype=np.float64))
    return (b[None, :] - X @ A.T).min(axis=1)


def _simplex_inverses(apex, verts, facets):
    """Adjugate inverse of the edge matrix of every apex simplex.

    Column j of M[f] is verts[facets[f, j]] - apex, so barycentric
    coordinates of x w.r.t. simplex f are Minv[f] @ (x - apex).  Returns
    (Minv, flat) where flat marks simplices with relative determinant
    below DET_REL_TOL; their Minv entries are zeroed.  The cofactor
    expressions replicate the compiled kernel term for term.
    """
    edges = verts[facets] - apex                # (F, d, d), rows = edge vectors
    M = np.transpose(edges, (0, 2, 1))          # columns = edge vectors
    d = M.shape[1]
    cs = np.maximum(np.abs(edges).max(axis=(1, 2)), 1e-300)
    Minv = np.empty_like(M)
    if d == 2:
        det = M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]
        thr = DET_REL_TOL * cs * cs
        flat = np.abs(det) <= thr
        det = np.where(flat, 1.0, det)
        Minv[:, 0, 0] = M[:, 1, 1] / det
        Minv[:, 0, 1] = -M[:, 0, 1] / det
        Minv[:, 1, 0] = -M[:, 1, 0] / det
        Minv[:, 1, 1] = M[:, 0, 0] / det
    else:
        det = (M[:, 0, 0] * (M[:, 1, 1] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 1])
               - M[:, 0, 1] * (M[:, 1, 0] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 0])
               + M[:, 0, 2] * (M[:, 1, 0] * M[:, 2, 1] - M[:, 1, 1] * M[:, 2, 0]))
        thr = DET_REL_TOL * cs * cs * cs
        flat = np.abs(det) <= thr
        det = np.where(flat, 1.0, det)
        Minv[:, 0, 0] = (M[:, 1, 1] * M[:, 2, 2] - M[:, 1, 2] * M[:, 2, 1]) / det
        Minv[:, 0, 1] = (M[:, 0, 2] * M[:, 2, 1] - M[:, 0, 1] * M[:, 2, 2]) / det
        Minv[:, 0, 2] = (M[:, 0, 1] * M[:, 1, 2] - M[:, 0, 2] * M[:, 1, 1]) / det
        Minv[:, 1, 0] = (M[:, 1, 2] * M[:, 2, 0] - M[:, 1, 0] * M[:, 2, 2]) / det
        Minv[:, 1, 1] = (M[:, 0, 0] * M[:, 2, 2] - M[:, 0, 2] * M[:, 2, 0]) / det
        Minv[:, 1, 2] = (M[:, 0, 2] * M[:, 1, 0] - M[:, 0, 0] * M[:, 1, 2]) / det
        Minv[:, 2, 0] = (M[:, 1, 0] * M[:, 2, 1] - M[:, 1, 1] * M[:, 2, 0]) / det
        Minv[:, 2, 1] = (M[:, 0, 1] * M[:, 2, 0] - M[:, 0, 0] * M[:, 2, 1]) / det
        Minv[:, 2, 2] = (M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] * M[:, 1, 0]) / det
    Minv[flat] = 0.0
    return Minv, flat


def _bary(Minv_sel, Y):
    """lam[n, j] = sum_k Minv_sel[n, j, k] * Y[n, k], accumulated in
    ascending k so every float matches the compiled kernel's loop."""
    lam = Minv_sel[:, :, 0] * Y[:, 0, None]
    for k in range(1, Y.shape[1]):
        lam = lam + Minv_sel[:, :, k] * Y[:, k, None]
    return lam


def points_in_star(apex, verts, facets, points, tol, hints=None, chunk=None):
    """Membership of each point in the union of apex simplices.

    Simplex f is spanned by the apex and the d facet vertices; a point is
    a member when its barycentric coordinates satisfy lam_j >= -tol and
    sum(lam) <= 1 + tol (tol is a barycentric tolerance, negative for a
    strict-interior test).  Returns (inside, simplex_index) where
    simplex_index[i] is the first facet containing point i, -1 if none.
    ``hints`` gives a facet to try first per point, which keeps repeated
    lookups along a ray O(1) instead of O(F).
    """
    apex = np.asarray(apex, dtype=np.float64)
    verts = np.asarray(verts, dtype=np.float64)
    facets = np.asarray(facets, dtype=np.int64)
    X = np.atleast_2d(np.asarray(points, dtype=np.float64))
    n = X.shape[0]
    nf = facets.shape[0]
    Minv, flat = _simplex_inverses(apex, verts, facets)
    inside = np.zeros(n, dtype=bool)
    where = np.full(n, -1, dtype=np.int64)
    Y = X - apex

    if hints is not None:
        h = np.asarray(hints, dtype=np.int64)
        idx = np.nonzero((h >= 0) & (h < nf))[0]
        if idx.size:
            lam = _bary(Minv[h[idx]], Y[idx])
            hit = ((lam >= -tol).all(axis=1)
                   & (lam.sum(axis=1) <= 1.0 + tol)
                   & ~flat[h[idx]])
            inside[idx[hit]] = True
            where[idx[hit]] = h[idx][hit]

    todo = np.nonzero(~inside)[0]
    if todo.size and nf:
        if chunk is None:
            chunk = max(1, 4_000_000 // nf)
        d = X.shape[1]
        for s in range(0, todo.size, chunk):
            sel = todo[s:s + chunk]
            Ysel = Y[sel]
            lam = Minv[None, :, :, 0] * Ysel[:, 0, None, None]
            for k in range(1, d):
                lam = lam + Minv[None, :, :, k] * Ysel[:, k, None, None]
            ok = ((lam >= -tol).all(axis=2)
                  & (lam.sum(axis=2) <= 1.0 + tol)
                  & ~flat[None, :])
            hit = ok.any(axis=1)
            inside[sel] = hit
            # argmax returns the first containing facet, matching the
            # compiled kernel's scan order
            where[sel[hit]] = ok[hit].argmax(axis=1)
    return inside, where


def push_facets(normals, offsets, facets, apex, verts, tol):
    """Move every hull facet plane inward to its deepest member vertex.

    For facet f the candidate vertices are those inside the simplex spanned
    by the apex and the facet's own vertices (closed within the barycentric
    tolerance ``tol``).  Among candidates, the vertex farthest from the
    facet plane wins; exact ties keep the lowest vertex index.  Returns
    (new_offsets, support_index) with support_index -1 (and the offset
    unchanged) where no candidate exists.
    """
    normals = np.asarray(normals, dtype=np.float64)
    offsets = np.asarray(offsets, dtype=np.float64)
    facets = np.asarray(facets, dtype=np.int64)
    apex = np.asarray(apex, dtype=np.float64)
    verts = np.asarray(verts, dtype=np.float64)
    nf = facets.shape[0]
    d = apex.shape[0]
    Minv, flat = _simplex_inverses(apex, verts, facets)
    Y = verts - apex
    new_b = offsets.astype(np.float64).copy()
    support = np.full(nf, -1, dtype=np.int64)
    for f in range(nf):
        if flat[f]:
            continue
        lam = _bary(np.broadcast_to(Minv[f], (Y.shape[0], d, d)), Y)
        member = (lam >= -tol).all(axis=1) & (lam.sum(axis=1) <= 1.0 + tol)
        if not member.any():
            continue
        dots = verts[:, 0] * normals[f, 0]
        for k in range(1, d):
            dots = dots + verts[:, k] * normals[f, k]
        depth = np.where(member, offsets[f] - dots, -np.inf)
        i = int(np.argmax(depth))       # first max == lowest index on ties
        new_b[f] = float(dots[i])
        support[f] = i
    return new_b, support
