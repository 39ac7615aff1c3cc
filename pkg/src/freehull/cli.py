"""Command line interface.

Exit codes: 0 success, 2 unreadable or malformed input, 3 geometric
degeneracy (degenerate cloud, unbounded system, query not wrapped),
4 query inside an obstacle.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bench import run_benchmark
from .convexify import run_pipeline
from .corridor import corridor_stats, generate_corridor
from .errors import (CorridorGap, DegenerateInput, DomainError, EmptyCloud,
                     InfeasibleSpec, InvalidRotation, NotInterior, NotWrapped,
                     ParseError, PathBlocked, QueryInsideObstacle, Unbounded)
from .flip import QueryFrame, make_frame
from .geometry import scaled_tol
from .io import (load_scene_specs, read_cloud, read_path, read_polytope,
                 write_cloud, write_polytope)
from .scenes import generate_scene

_DEGENERACY = (DegenerateInput, NotWrapped, Unbounded, NotInterior,
               EmptyCloud, DomainError, CorridorGap, InvalidRotation)
_COLLISION = (QueryInsideObstacle, PathBlocked)


def _parse_vector(text: str) -> np.ndarray:
    try:
        vals = [float(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise ParseError(f"cannot parse vector {text!r}") from None
    if len(vals) not in (2, 3):
        raise ParseError(f"expected 2 or 3 numbers, got {len(vals)} in {text!r}")
    return np.array(vals)


def _parse_bbox(text: str):
    try:
        vals = [float(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise ParseError(f"cannot parse bbox {text!r}") from None
    if len(vals) not in (4, 6):
        raise ParseError(
            f"bbox needs 'xmin,ymin[,zmin],xmax,ymax[,zmax]', got {len(vals)} numbers")
    d = len(vals) // 2
    return np.array(vals[:d]), np.array(vals[d:])


def _cmd_gen(args) -> int:
    cloud = read_cloud(args.cloud, args.format)
    query = _parse_vector(args.query)
    bbox = _parse_bbox(args.bbox) if args.bbox else None
    frame = make_frame(cloud, query, radius=args.radius, gamma=args.gamma, bbox=bbox)
    poly, stats, _ = run_pipeline(cloud, frame)
    sidecar = write_polytope(poly, args.out)
    print(f"wrote {args.out}" + (f" (+ {sidecar.name})" if sidecar else ""))
    print(f"hyperplanes={poly.hyperplane_count} vertices={len(poly.vertices)} "
          f"volume={poly.volume:.6g} safety_repairs={poly.safety_repairs} "
          f"total_ms={stats.total_ms:.2f}")
    return 0


def _cmd_scene(args) -> int:
    specs = load_scene_specs(args.spec)
    if not 0 <= args.index < len(specs):
        raise ParseError(f"--index {args.index} out of range; file has {len(specs)} spec(s)")
    scene = generate_scene(specs[args.index])
    write_cloud(scene.cloud, args.out)
    print(f"wrote {args.out}: {len(scene.cloud)} points "
          f"({specs[args.index].scene_id()}, seed {specs[args.index].seed}, "
          f"free volume {scene.free_volume:.6g})")
    return 0


def _cmd_corridor(args) -> int:
    cloud = read_cloud(args.cloud, args.format)
    path = read_path(args.path)
    bbox = _parse_bbox(args.bbox) if args.bbox else None
    radius = args.radius if args.radius else args.crop * np.sqrt(path.dim)
    template = QueryFrame(path.points[0], radius, bbox)
    corridor = generate_corridor(cloud, path, template, args.time_threshold,
                                 crop_halfwidth=args.crop)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for i, poly in enumerate(corridor.polytopes):
        target = out / f"polytope_{i:03d}.json"
        write_polytope(poly, target)
        files.append(target.name)
    count, hyperplanes, ms = corridor_stats(corridor)
    (out / "corridor.json").write_text(json.dumps({
        "polytope_count": count,
        "hyperplane_count": hyperplanes,
        "build_time_ms": ms,
        "switch_indices": corridor.switch_indices,
        "files": files}, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {count} polytope(s) to {out} "
          f"({hyperplanes} hyperplanes, {ms:.1f} ms)")
    return 0


def _cmd_bench(args) -> int:
    report = run_benchmark(args.spec, args.reps, gamma=args.gamma)
    report.to_csv(args.out)
    print(f"wrote {args.out}: {len(report.rows)} row(s), {len(report.errors)} error(s)")
    for scene_id, message in report.errors:
        print(f"  error in {scene_id}: {message}", file=sys.stderr)
    return 0


def _cmd_check(args) -> int:
    """Independent verification pass: re-read both files, re-test every point."""
    cloud = read_cloud(args.cloud, args.format)
    poly = read_polytope(args.poly)
    if cloud.dim != poly.dim:
        raise ParseError(f"cloud is {cloud.dim}D but polytope is {poly.dim}D")
    tol = args.tol if args.tol is not None else 100.0 * scaled_tol(cloud.points)
    slack = poly.system.b[None, :] - cloud.points @ poly.system.A.T
    violations = int((slack.min(axis=1) > tol).sum())
    if violations:
        print(f"FAIL: {violations} of {len(cloud)} cloud point(s) strictly inside "
              f"the polytope (tol {tol:.3g})")
        return 1
    print(f"OK: none of {len(cloud)} cloud points is strictly inside (tol {tol:.3g})")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="freehull",
        description="Generate large obstacle-free convex polytopes from point clouds.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate one polytope around a query point")
    gen.add_argument("--cloud", required=True, help="cloud file (CSV or ASCII PLY)")
    gen.add_argument("--format", choices=("csv", "ply"), help="cloud format (default: by extension)")
    gen.add_argument("--query", required=True, help="query point, e.g. '0,0,0'")
    gen.add_argument("--radius", type=float, help="inversion radius (default: derived)")
    gen.add_argument("--gamma", type=float, default=1.0,
                     help="radius factor when deriving (default 1.0)")
    gen.add_argument("--bbox", help="workspace box 'xmin,ymin[,zmin],xmax,ymax[,zmax]'")
    gen.add_argument("--out", required=True, help="output polytope JSON")
    gen.set_defaults(func=_cmd_gen)

    scene = sub.add_parser("scene", help="write a benchmark scene cloud as CSV")
    scene.add_argument("--spec", required=True, help="scene spec JSON")
    scene.add_argument("--index", type=int, default=0, help="spec index in the file")
    scene.add_argument("--out", required=True, help="output CSV")
    scene.set_defaults(func=_cmd_scene)

    cor = sub.add_parser("corridor", help="chain polytopes along a timed path")
    cor.add_argument("--cloud", required=True)
    cor.add_argument("--format", choices=("csv", "ply"))
    cor.add_argument("--path", required=True, help="waypoint file: 't x y [z]' lines")
    cor.add_argument("--time-threshold", type=float, default=float("inf"),
                     help="respawn after this much path time (default: never)")
    cor.add_argument("--radius", type=float, help="inversion radius (default: crop diagonal)")
    cor.add_argument("--crop", type=float, default=10.0,
                     help="local crop box half-width (default 10)")
    cor.add_argument("--bbox", help="workspace box that confines every polytope")
    cor.add_argument("--out", required=True, help="output directory")
    cor.set_defaults(func=_cmd_corridor)

    bench = sub.add_parser("bench", help="run scenes and write a metrics CSV")
    bench.add_argument("--spec", required=True, help="scene spec JSON")
    bench.add_argument("--reps", type=int, default=1, help="repetitions per scene")
    bench.add_argument("--gamma", type=float, default=1.0)
    bench.add_argument("--out", required=True, help="output CSV")
    bench.set_defaults(func=_cmd_bench)

    check = sub.add_parser("check", help="verify a polytope against a cloud")
    check.add_argument("--cloud", required=True)
    check.add_argument("--format", choices=("csv", "ply"))
    check.add_argument("--poly", required=True, help="polytope JSON")
    check.add_argument("--tol", type=float, help="strict-interior tolerance")
    check.set_defaults(func=_cmd_check)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return int(args.func(args) or 0)
    except (ParseError, InfeasibleSpec, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _DEGENERACY as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except _COLLISION as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
