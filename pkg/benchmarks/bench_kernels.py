"""Timing comparison of the compiled kernels against the numpy fallback.

Run from the repository root:

    python3 benchmarks/bench_kernels.py --reps 30

Both implementations are imported directly, bypassing the dispatch in
``freehull.kernels``, so the table is meaningful regardless of which one
the package itself picked at import time.  Results are checked to be
identical (bitwise for everything except ``min_slack``, which goes
through BLAS) before any timing is reported.
"""

import argparse
import statistics
from time import perf_counter

import numpy as np

import freehull._kernels_py as kernels_py
from freehull import SceneSpec, build_star, convex_hull, make_frame
from freehull.scenes import generate_scene
from freehull.star import bary_tol

try:
    import freehull._kernels as kernels_c
except ImportError:
    kernels_c = None


def _median_ms(fn, reps):
    fn()  # warm-up
    times = []
    for _ in range(reps):
        t0 = perf_counter()
        fn()
        times.append((perf_counter() - t0) * 1e3)
    return statistics.median(times)


def _workloads():
    """(label, size, kwargs-free closures per implementation, checker)."""
    out = []
    for count in (3_600, 22_800):
        scene = generate_scene(SceneSpec("cross", seed=0, point_count=count))
        frame = make_frame(scene.cloud, scene.center)
        star = build_star(scene.cloud, frame)
        hull = convex_hull(star.vertices)
        tol = bary_tol(star, 1e-9)

        centered = scene.cloud.points - frame.query
        norms = np.linalg.norm(centered, axis=1)
        keep = (norms > 1e-9) & (norms < 2.0 * frame.radius - 1e-9)
        flip_in = np.ascontiguousarray(centered[keep])

        rng = np.random.default_rng(7)
        probes = rng.uniform(-10.0, 10.0, size=(10_000, 3))
        # interior probes (apex-vertex interpolants) so the hinted row
        # exercises the O(1) fast path instead of outside-point full scans
        vidx = rng.integers(0, star.vertices.shape[0], size=10_000)
        t = rng.uniform(0.05, 0.9, size=10_000)[:, None]
        probes_in = star.apex + t * (star.vertices[vidx] - star.apex)

        poly_A = hull.normals
        poly_b = hull.offsets
        pts = scene.cloud.points

        def rows(mod, flip_in=flip_in, radius=frame.radius, A=poly_A,
                 b=poly_b, pts=pts, star=star, probes=probes,
                 probes_in=probes_in, hull=hull, tol=tol):
            hints = mod.points_in_star(star.apex, star.vertices, star.facets,
                                       probes_in, tol, None)[1]
            return {
                "radial_flip": lambda: mod.radial_flip(flip_in, radius),
                "min_slack": lambda: mod.min_slack(A, b, pts),
                "points_in_star": lambda: mod.points_in_star(
                    star.apex, star.vertices, star.facets, probes, tol, None),
                "points_in_star (hinted)": lambda: mod.points_in_star(
                    star.apex, star.vertices, star.facets, probes_in, tol,
                    hints),
                "push_facets": lambda: mod.push_facets(
                    hull.normals, hull.offsets, hull.facet_vertices,
                    star.apex, star.vertices, tol),
            }

        out.append((count, rows))
    return out


def _check_parity(label, a, b):
    if isinstance(a, tuple):
        for x, y in zip(a, b):
            _check_parity(label, x, y)
        return
    if label == "min_slack":
        assert np.allclose(a, b, rtol=0.0, atol=1e-12), label
    else:
        assert np.array_equal(a, b), label


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--reps", type=int, default=30,
                        help="timing repetitions per cell (median reported)")
    args = parser.parse_args(argv)

    if kernels_c is None:
        print("compiled extension not available; timing the numpy fallback only")

    header = f"{'kernel':<26} {'points':>8} {'numpy':>10}"
    if kernels_c is not None:
        header += f" {'compiled':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))

    for count, rows in _workloads():
        py_rows = rows(kernels_py)
        c_rows = rows(kernels_c) if kernels_c is not None else None
        for label, py_fn in py_rows.items():
            if c_rows is not None:
                _check_parity(label, py_fn(), c_rows[label]())
            py_ms = _median_ms(py_fn, args.reps)
            line = f"{label:<26} {count:>8,} {py_ms:>8.3f} ms"
            if c_rows is not None:
                c_ms = _median_ms(c_rows[label], args.reps)
                line += f" {c_ms:>8.3f} ms {py_ms / c_ms:>7.1f}x"
            print(line)


if __name__ == "__main__":
    main()
