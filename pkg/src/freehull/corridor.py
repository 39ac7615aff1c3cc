"""Chain overlapping free polytopes along a timed reference path.

Walking the waypoints, a new polytope is spawned whenever the current one
no longer contains the next waypoint, or the time since the last spawn
reaches the threshold.  The spawn query is the last waypoint still inside
the current polytope, which makes consecutive polytopes overlap by
construction.  Each spawn crops the cloud to a local box around its query
and uses that box as the workspace, so every polytope is point free with
respect to the full cloud.
"""

from __future__ import annotations

from dataclasses import dataclass
from time import perf_counter

import numpy as np

from .convexify import FreePolytope, run_pipeline
from .errors import CorridorGap, PathBlocked, QueryInsideObstacle
from .flip import QueryFrame
from .geometry import PointCloud, contains, scaled_tol


@dataclass
class ReferencePath:
    """Timestamped waypoints t -> x(t); times strictly increase."""

    times: np.ndarray
    points: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float).reshape(-1)
        p = np.ascontiguousarray(self.points, dtype=float)
        if p.ndim != 2 or p.shape[1] not in (2, 3):
            raise ValueError(f"waypoints must be (N, 2) or (N, 3), got {p.shape}")
        if t.shape[0] != p.shape[0]:
            raise ValueError(f"{t.shape[0]} timestamps for {p.shape[0]} waypoints")
        if t.shape[0] < 2:
            raise ValueError("a path needs at least 2 waypoints")
        if not (np.isfinite(t).all() and np.isfinite(p).all()):
            raise ValueError("path contains non-finite values")
        if not (np.diff(t) > 0).all():
            raise ValueError("timestamps must be strictly increasing")
        self.times = t
        self.points = p

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return int(self.points.shape[0])


@dataclass
class CorridorStats:
    polytope_count: int
    hyperplane_count: int
    build_time_ms: float


@dataclass
class Corridor:
    """Ordered polytopes plus the waypoint index each was spawned at."""

    polytopes: list
    switch_indices: list
    stats: CorridorStats


def corridor_stats(corridor: Corridor) -> tuple:
    """(polytope_count, total hyperplane count, build_time_ms), recomputed
    from the polytopes so the counts stay additive."""
    return (len(corridor.polytopes),
            int(sum(p.hyperplane_count for p in corridor.polytopes)),
            corridor.stats.build_time_ms)


def generate_corridor(cloud: PointCloud, path: ReferencePath,
                      frame_template: QueryFrame, time_threshold: float,
                      *, crop_halfwidth: float = 10.0,
                      tol: float | None = None, **pipeline_kwargs) -> Corridor:
    """Cover the path with overlapping point-free polytopes.

    ``frame_template`` supplies the inversion radius and, optionally, the
    workspace box that every waypoint must stay strictly inside; its query
    is ignored.  ``time_threshold`` must be positive (it may be inf to
    disable time-based spawning).  Raises PathBlocked when a spawn query
    collides with an obstacle point and CorridorGap when the free space
    around a waypoint does not reach the next one.
    """
    if cloud.dim != path.dim or frame_template.dim != path.dim:
        raise ValueError("cloud, path and frame dimensions must agree")
    if not time_threshold > 0:
        raise ValueError(f"time_threshold must be positive, got {time_threshold}")
    if not crop_halfwidth > 0:
        raise ValueError(f"crop_halfwidth must be positive, got {crop_halfwidth}")
    workspace = frame_template.bbox
    if workspace is not None:
        wlo, whi = workspace
        if not ((path.points > wlo).all() and (path.points < whi).all()):
            raise ValueError("every waypoint must be strictly inside the workspace bbox")
    if tol is None:
        tol = scaled_tol(path.points)

    t_wall = perf_counter()
    pts = cloud.points

    def spawn(idx: int) -> FreePolytope:
        q = path.points[idx]
        lo = q - crop_halfwidth
        hi = q + crop_halfwidth
        if workspace is not None:
            lo = np.maximum(lo, workspace[0])
            hi = np.minimum(hi, workspace[1])
        mask = ((pts >= lo) & (pts <= hi)).all(axis=1)
        local = PointCloud(pts[mask])
        frame = QueryFrame(q, frame_template.radius, (lo, hi))
        try:
            poly, _, _ = run_pipeline(local, frame, **pipeline_kwargs)
        except QueryInsideObstacle as exc:
            raise PathBlocked(f"waypoint {idx} lies inside an obstacle: {exc}",
                              waypoint_index=idx) from exc
        return poly

    polytopes = [spawn(0)]
    switch_indices = [0]
    last_spawn_idx = 0
    last_spawn_time = path.times[0]
    last_inside = 0

    k = 1
    while k < len(path):
        inside = contains(polytopes[-1].system, path.points[k], tol)
        timed_out = (path.times[k] - last_spawn_time) >= time_threshold
        if inside and not timed_out:
            last_inside = k
            k += 1
            continue
        spawn_idx = k if inside else last_inside
        if spawn_idx == last_spawn_idx:
            raise CorridorGap(
                f"cannot cover waypoint {k}: the polytope spawned at waypoint "
                f"{spawn_idx} does not reach it")
        polytopes.append(spawn(spawn_idx))
        switch_indices.append(spawn_idx)
        last_spawn_idx = spawn_idx
        last_spawn_time = path.times[spawn_idx]
        last_inside = spawn_idx
        # waypoint k is re-evaluated against the new polytope

    stats = CorridorStats(
        polytope_count=len(polytopes),
        hyperplane_count=int(sum(p.hyperplane_count for p in polytopes)),
        build_time_ms=(perf_counter() - t_wall) * 1e3)
    return Corridor(polytopes=polytopes, switch_indices=switch_indices, stats=stats)
