# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled hot kernels.

Semantics mirror ``_kernels_py`` exactly (same tie breaking, tolerance
conventions and return types); that module is the reference when in doubt.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs, sqrt

cnp.import_array()

cdef double DET_REL_TOL = 1e-12


def radial_flip(centered, double radius):
    """x -> x * (2R - |x|) / |x| rowwise; an involution on 0 < |x| < 2R."""
    cdef double[:, ::1] x = np.ascontiguousarray(centered, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0], d = x.shape[1], i, j
    out_arr = np.empty((n, d), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double s, nrm, f
    with nogil:
        for i in range(n):
            s = 0.0
            for j in range(d):
                s += x[i, j] * x[i, j]
            nrm = sqrt(s)
            f = (2.0 * radius - nrm) / nrm
            for j in range(d):
                out[i, j] = x[i, j] * f
    return out_arr


def min_slack(A, b, points):
    """Per point, min over rows of b_i - a_i.x."""
    cdef double[:, ::1] A_v = np.ascontiguousarray(A, dtype=np.float64)
    cdef double[::1] b_v = np.ascontiguousarray(b, dtype=np.float64)
    cdef double[:, ::1] X = np.ascontiguousarray(np.atleast_2d(points), dtype=np.float64)
    cdef Py_ssize_t n = X.shape[0], m = A_v.shape[0], d = X.shape[1], i, r, k
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double best, s
    with nogil:
        for i in range(n):
            best = INFINITY
            for r in range(m):
                s = b_v[r]
                for k in range(d):
                    s -= A_v[r, k] * X[i, k]
                if s < best:
                    best = s
            out[i] = best
    return out_arr


cdef void _build_inverses(double[:, ::1] verts, cnp.int64_t[:, ::1] facets,
                          double[::1] apex, double[:, :, ::1] Minv,
                          unsigned char[::1] flat) noexcept nogil:
    # Column j of M is verts[facets[f, j]] - apex; Minv holds the adjugate
    # inverse, zeroed (and flagged flat) for near-singular simplices.
    cdef Py_ssize_t nf = facets.shape[0], d = apex.shape[0], f, i, j
    cdef double M[3][3]
    cdef double det, cs, a, thr
    for f in range(nf):
        cs = 0.0
        for j in range(d):
            for i in range(d):
                a = verts[facets[f, j], i] - apex[i]
                M[i][j] = a
                if fabs(a) > cs:
                    cs = fabs(a)
        if cs < 1e-300:
            cs = 1e-300
        if d == 2:
            det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
            thr = DET_REL_TOL * cs * cs
        else:
            det = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
                   - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
                   + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))
            thr = DET_REL_TOL * cs * cs * cs
        if fabs(det) <= thr:
            flat[f] = 1
            for i in range(d):
                for j in range(d):
                    Minv[f, i, j] = 0.0
            continue
        flat[f] = 0
        if d == 2:
            Minv[f, 0, 0] = M[1][1] / det
            Minv[f, 0, 1] = -M[0][1] / det
            Minv[f, 1, 0] = -M[1][0] / det
            Minv[f, 1, 1] = M[0][0] / det
        else:
            Minv[f, 0, 0] = (M[1][1] * M[2][2] - M[1][2] * M[2][1]) / det
            Minv[f, 0, 1] = (M[0][2] * M[2][1] - M[0][1] * M[2][2]) / det
            Minv[f, 0, 2] = (M[0][1] * M[1][2] - M[0][2] * M[1][1]) / det
            Minv[f, 1, 0] = (M[1][2] * M[2][0] - M[1][0] * M[2][2]) / det
            Minv[f, 1, 1] = (M[0][0] * M[2][2] - M[0][2] * M[2][0]) / det
            Minv[f, 1, 2] = (M[0][2] * M[1][0] - M[0][0] * M[1][2]) / det
            Minv[f, 2, 0] = (M[1][0] * M[2][1] - M[1][1] * M[2][0]) / det
            Minv[f, 2, 1] = (M[0][1] * M[2][0] - M[0][0] * M[2][1]) / det
            Minv[f, 2, 2] = (M[0][0] * M[1][1] - M[0][1] * M[1][0]) / det


cdef inline bint _member(double[:, :, ::1] Minv, unsigned char[::1] flat,
                         Py_ssize_t f, double* y, Py_ssize_t d,
                         double tol) noexcept nogil:
    cdef double lam, s = 0.0
    cdef Py_ssize_t j, k
    if flat[f]:
        return 0
    for j in range(d):
        lam = 0.0
        for k in range(d):
            lam += Minv[f, j, k] * y[k]
        if lam < -tol:
            return 0
        s += lam
    return s <= 1.0 + tol


def points_in_star(apex, verts, facets, points, double tol, hints=None, chunk=None):
    """Membership in the union of apex simplices; see the numpy reference.

    Returns (inside, simplex_index); ``chunk`` is accepted for signature
    parity and ignored.
    """
    cdef double[::1] apex_v = np.ascontiguousarray(apex, dtype=np.float64)
    cdef double[:, ::1] verts_v = np.ascontiguousarray(verts, dtype=np.float64)
    cdef cnp.int64_t[:, ::1] facets_v = np.ascontiguousarray(facets, dtype=np.int64)
    cdef double[:, ::1] X = np.ascontiguousarray(np.atleast_2d(points), dtype=np.float64)
    cdef Py_ssize_t n = X.shape[0], nf = facets_v.shape[0], d = apex_v.shape[0]
    cdef Py_ssize_t i, f, k

    Minv_arr = np.zeros((nf, d, d), dtype=np.float64)
    flat_arr = np.zeros(nf, dtype=np.uint8)
    cdef double[:, :, ::1] Minv = Minv_arr
    cdef unsigned char[::1] flat = flat_arr
    _build_inverses(verts_v, facets_v, apex_v, Minv, flat)

    inside_arr = np.zeros(n, dtype=np.uint8)
    where_arr = np.full(n, -1, dtype=np.int64)
    cdef unsigned char[::1] inside = inside_arr
    cdef cnp.int64_t[::1] where = where_arr

    cdef bint has_hints = hints is not None
    cdef cnp.int64_t[::1] h
    if has_hints:
        h = np.ascontiguousarray(hints, dtype=np.int64)
    else:
        h = np.empty(0, dtype=np.int64)

    cdef double y[3]
    cdef cnp.int64_t hf
    with nogil:
        for i in range(n):
            for k in range(d):
                y[k] = X[i, k] - apex_v[k]
            if has_hints:
                hf = h[i]
                if 0 <= hf < nf and _member(Minv, flat, hf, y, d, tol):
                    inside[i] = 1
                    where[i] = hf
                    continue
            for f in range(nf):
                if _member(Minv, flat, f, y, d, tol):
                    inside[i] = 1
                    where[i] = f
                    break
    return inside_arr.view(np.bool_), where_arr


def push_facets(normals, offsets, facets, apex, verts, double tol):
    """Inward push of every facet plane to its deepest member vertex;
    see the numpy reference for the exact contract."""
    cdef double[:, ::1] N = np.ascontiguousarray(normals, dtype=np.float64)
    cdef double[::1] c = np.ascontiguousarray(offsets, dtype=np.float64)
    cdef cnp.int64_t[:, ::1] facets_v = np.ascontiguousarray(facets, dtype=np.int64)
    cdef double[::1] apex_v = np.ascontiguousarray(apex, dtype=np.float64)
    cdef double[:, ::1] verts_v = np.ascontiguousarray(verts, dtype=np.float64)
    cdef Py_ssize_t nf = facets_v.shape[0], nv = verts_v.shape[0], d = apex_v.shape[0]
    cdef Py_ssize_t f, v, k

    Minv_arr = np.zeros((nf, d, d), dtype=np.float64)
    flat_arr = np.zeros(nf, dtype=np.uint8)
    cdef double[:, :, ::1] Minv = Minv_arr
    cdef unsigned char[::1] flat = flat_arr
    _build_inverses(verts_v, facets_v, apex_v, Minv, flat)

    new_b_arr = np.array(offsets, dtype=np.float64, copy=True)
    support_arr = np.full(nf, -1, dtype=np.int64)
    cdef double[::1] new_b = new_b_arr
    cdef cnp.int64_t[::1] support = support_arr

    cdef double y[3]
    cdef double best, depth, dot
    cdef cnp.int64_t best_v
    with nogil:
        for f in range(nf):
            if flat[f]:
                continue
            best = -INFINITY
            best_v = -1
            for v in range(nv):
                for k in range(d):
                    y[k] = verts_v[v, k] - apex_v[k]
                if not _member(Minv, flat, f, y, d, tol):
                    continue
                dot = 0.0
                for k in range(d):
                    dot += verts_v[v, k] * N[f, k]
                depth = c[f] - dot
                if depth > best:
                    best = depth
                    best_v = v
            if best_v >= 0:
                dot = 0.0
                for k in range(d):
                    dot += verts_v[best_v, k] * N[f, k]
                new_b[f] = dot
                support[f] = best_v
    return new_b_arr, support_arr
