"""File formats: clouds (CSV / ASCII PLY), polytopes (JSON plus an OBJ mesh
sidecar in 3D), timed paths, scene spec files and benchmark reports."""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from .convexify import FreePolytope
from .corridor import ReferencePath
from .errors import DimensionMismatch, ParseError
from .geometry import HalfSpaceSystem, PointCloud, convex_hull
from .scenes import SceneSpec

# Environment variable that overrides every seed in a scene spec file,
# for ad-hoc reruns of a benchmark with a different draw.
SEED_ENV = "FREEHULL_SEED"

_SPEC_KEYS = {"shape", "seed", "seeds", "dim", "cube_extent", "point_count",
              "free_params"}


def read_cloud(path, fmt: str | None = None) -> PointCloud:
    """Load a cloud from CSV (x,y[,z] rows, optional header line) or ASCII
    PLY.  The format is inferred from the extension unless given."""
    path = Path(path)
    if fmt is None:
        fmt = "ply" if path.suffix.lower() == ".ply" else "csv"
    if fmt == "csv":
        return _read_csv_cloud(path)
    if fmt == "ply":
        return _read_ply_cloud(path)
    raise ValueError(f"unknown cloud format {fmt!r}; expected 'csv' or 'ply'")


def _read_csv_cloud(path: Path) -> PointCloud:
    rows = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            parts = [t.strip() for t in line.split(",")]
            try:
                vals = [float(t) for t in parts]
            except ValueError:
                if lineno == 1 and not rows:
                    continue        # header line
                raise ParseError(f"{path.name}:{lineno}: cannot parse {line!r}") from None
            if len(vals) not in (2, 3):
                raise ParseError(
                    f"{path.name}:{lineno}: expected 2 or 3 columns, got {len(vals)}")
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise DimensionMismatch(
                    f"{path.name}:{lineno}: row has {len(vals)} columns, earlier rows have {width}")
            rows.append(vals)
    if not rows:
        raise ParseError(f"{path.name}: no points found")
    return PointCloud(np.array(rows, dtype=float))


def _read_ply_cloud(path: Path) -> PointCloud:
    with open(path, "r", encoding="ascii", errors="replace") as fh:
        lines = iter(enumerate(fh, start=1))

        def next_content():
            for lineno, raw in lines:
                line = raw.strip()
                if line and not line.startswith(("comment", "obj_info")):
                    return lineno, line
            return None, None

        lineno, line = next_content()
        if line != "ply":
            raise ParseError(f"{path.name}:{lineno or 1}: not a PLY file (missing 'ply' magic)")
        lineno, line = next_content()
        if line is None or not line.startswith("format"):
            raise ParseError(f"{path.name}:{lineno or 2}: missing format line")
        if "ascii" not in line.split():
            raise ParseError(
                f"{path.name}:{lineno}: only ASCII PLY is supported, got {line!r}")

        elements = []       # (name, count, [property names or None for lists])
        while True:
            lineno, line = next_content()
            if line is None:
                raise ParseError(f"{path.name}: header ended without end_header")
            if line == "end_header":
                break
            tokens = line.split()
            if tokens[0] == "element":
                if len(tokens) != 3:
                    raise ParseError(f"{path.name}:{lineno}: malformed element line {line!r}")
                try:
                    count = int(tokens[2])
                except ValueError:
                    raise ParseError(f"{path.name}:{lineno}: bad element count in {line!r}") from None
                elements.append((tokens[1], count, []))
            elif tokens[0] == "property":
                if not elements:
                    raise ParseError(f"{path.name}:{lineno}: property before any element")
                name = None if tokens[1] == "list" else tokens[-1]
                elements[-1][2].append(name)
            else:
                raise ParseError(f"{path.name}:{lineno}: unexpected header line {line!r}")

        vertex_elem = next((e for e in elements if e[0] == "vertex"), None)
        if vertex_elem is None:
            raise ParseError(f"{path.name}: no vertex element in header")
        props = vertex_elem[2]
        if "x" not in props or "y" not in props:
            raise ParseError(f"{path.name}: vertex element lacks x/y properties")
        cols = [props.index("x"), props.index("y")]
        if "z" in props:
            cols.append(props.index("z"))

        pts = None
        for name, count, eprops in elements:
            if name == "vertex":
                rows = np.empty((count, len(cols)))
                for i in range(count):
                    lineno, line = next_content()
                    if line is None:
                        raise ParseError(
                            f"{path.name}: vertex data ends after {i} of {count} rows")
                    tokens = line.split()
                    if len(tokens) < len(eprops):
                        raise ParseError(
                            f"{path.name}:{lineno}: vertex row has {len(tokens)} "
                            f"values, header declares {len(eprops)}")
                    try:
                        rows[i] = [float(tokens[c]) for c in cols]
                    except ValueError:
                        raise ParseError(
                            f"{path.name}:{lineno}: cannot parse vertex row {line!r}") from None
                pts = rows
            else:
                for _ in range(count):
                    next_content()
    if pts is None or pts.shape[0] == 0:
        raise ParseError(f"{path.name}: no points found")
    return PointCloud(pts)


def write_cloud(cloud: PointCloud, path) -> None:
    """Write a cloud as headerless CSV at full float precision."""
    with open(path, "w", encoding="utf-8") as fh:
        for row in cloud.points:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def write_polytope(poly: FreePolytope, path) -> Path | None:
    """Write a polytope as JSON; in 3D also write an OBJ mesh sidecar.

    Floats are serialized with shortest round-trip repr, so reading the
    file back reproduces every coefficient exactly.  Returns the sidecar
    path (or None in 2D).
    """
    path = Path(path)
    doc = {"dim": poly.dim,
           "A": poly.system.A.tolist(),
           "b": poly.system.b.tolist(),
           "vertices": poly.vertices.tolist(),
           "interior": poly.interior.tolist(),
           "volume": poly.volume}
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    if poly.dim != 3 or poly.vertices.shape[0] < 4:
        return None
    sidecar = path.with_suffix(".obj")
    if sidecar == path:
        sidecar = path.with_name(path.name + ".obj")
    hull = convex_hull(poly.vertices)
    with open(sidecar, "w", encoding="utf-8") as fh:
        fh.write(f"# triangle mesh of {path.name}\n")
        for v in poly.vertices:
            fh.write(f"v {float(v[0])!r} {float(v[1])!r} {float(v[2])!r}\n")
        for tri in hull.facet_vertices:
            fh.write(f"f {tri[0] + 1} {tri[1] + 1} {tri[2] + 1}\n")
    return sidecar


def read_polytope(path) -> FreePolytope:
    """Read a polytope written by write_polytope."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path.name}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    missing = {"dim", "A", "b", "vertices", "interior", "volume"} - set(doc)
    if missing:
        raise ParseError(f"{path.name}: missing fields {sorted(missing)}")
    try:
        system = HalfSpaceSystem(np.array(doc["A"], dtype=float),
                                 np.array(doc["b"], dtype=float))
        vertices = np.array(doc["vertices"], dtype=float)
        interior = np.array(doc["interior"], dtype=float)
        volume = float(doc["volume"])
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{path.name}: {exc}") from None
    if int(doc["dim"]) != system.dim:
        raise DimensionMismatch(
            f"{path.name}: dim field says {doc['dim']}, A has {system.dim} columns")
    return FreePolytope(system=system, vertices=vertices, interior=interior,
                        volume=volume, hyperplane_count=system.nrows)


def read_path(path) -> ReferencePath:
    """Load a timed path: one 't x y [z]' line per waypoint, '#' comments."""
    path = Path(path)
    times = []
    points = []
    width = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) not in (3, 4):
                raise ParseError(
                    f"{path.name}:{lineno}: expected 't x y [z]', got {len(tokens)} values")
            try:
                vals = [float(t) for t in tokens]
            except ValueError:
                raise ParseError(f"{path.name}:{lineno}: cannot parse {line!r}") from None
            if width is None:
                width = len(vals)
            elif len(vals) != width:
                raise DimensionMismatch(
                    f"{path.name}:{lineno}: row has {len(vals)} values, earlier rows have {width}")
            times.append(vals[0])
            points.append(vals[1:])
    if not times:
        raise ParseError(f"{path.name}: no waypoints found")
    try:
        return ReferencePath(np.array(times), np.array(points))
    except ValueError as exc:
        raise ParseError(f"{path.name}: {exc}") from None


def load_scene_specs(path) -> list[SceneSpec]:
    """Load scene specs from JSON: one object or a list of objects.

    An entry may carry "seeds": [..] as shorthand for one spec per seed.
    The FREEHULL_SEED environment variable, when set, overrides every seed.
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path.name}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    entries = doc if isinstance(doc, list) else [doc]
    specs = []
    for pos, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ParseError(f"{path.name}: entry {pos} is not an object")
        unknown = set(entry) - _SPEC_KEYS
        if unknown:
            raise ParseError(f"{path.name}: entry {pos} has unknown keys {sorted(unknown)}")
        if "shape" not in entry:
            raise ParseError(f"{path.name}: entry {pos} lacks 'shape'")
        base = {k: entry[k] for k in ("dim", "cube_extent", "point_count", "free_params")
                if k in entry}
        seeds = entry["seeds"] if "seeds" in entry else [entry.get("seed", 0)]
        if not isinstance(seeds, list):
            raise ParseError(f"{path.name}: entry {pos}: 'seeds' must be a list")
        for seed in seeds:
            specs.append(SceneSpec(shape=entry["shape"], seed=int(seed), **base))
    override = os.environ.get(SEED_ENV)
    if override is not None:
        try:
            forced = int(override)
        except ValueError:
            raise ParseError(f"{SEED_ENV}={override!r} is not an integer") from None
        for spec in specs:
            spec.seed = forced
    return specs
