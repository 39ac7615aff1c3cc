"""Seeded synthetic scenes: uniform clutter with a known-free region.

Points are drawn uniformly in the cube [-cube_extent, cube_extent]^dim and
rejected inside the free region, whose exact volume is known analytically.
Sampling uses numpy's PCG64 generator seeded from the spec and draws in
fixed-size batches, so a given spec reproduces the same cloud bit for bit
on any platform.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InfeasibleSpec
from .geometry import PointCloud

logger = logging.getLogger(__name__)

SHAPES = ("sphere", "cuboid", "cross")

# Batches drawn before giving up on a spec whose free region was declared
# feasible but rejects nearly everything.
_MAX_BATCHES = 1000


def default_free_params(shape: str, dim: int) -> dict:
    """Built-in free-region geometry per shape (truncated to dim)."""
    if shape == "sphere":
        return {"radius": 2.0}
    if shape == "cuboid":
        return {"half_extents": [3.0, 2.0, 1.0][:dim]}
    if shape == "cross":
        return {"half_extents": [[4.0, 1.0, 1.0][:dim], [1.0, 4.0, 1.0][:dim]]}
    raise ValueError(f"unknown shape {shape!r}; expected one of {SHAPES}")


@dataclass
class SceneSpec:
    """Reproducible description of one benchmark scene."""

    shape: str
    seed: int
    dim: int = 3
    cube_extent: float = 10.0
    point_count: int = 3600
    free_params: dict | None = None

    def resolved_params(self) -> dict:
        params = dict(default_free_params(self.shape, self.dim))
        if self.free_params:
            params.update(self.free_params)
        return params

    def scene_id(self) -> str:
        return f"{self.shape}-{self.dim}d"

    def to_dict(self) -> dict:
        doc = {"shape": self.shape, "seed": self.seed, "dim": self.dim,
               "cube_extent": self.cube_extent, "point_count": self.point_count}
        if self.free_params is not None:
            doc["free_params"] = self.free_params
        return doc


@dataclass
class Scene:
    """A generated cloud plus ground truth about its free region."""

    cloud: PointCloud
    spec: SceneSpec
    free_contains: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    free_volume: float = 0.0

    @property
    def center(self) -> np.ndarray:
        return np.zeros(self.spec.dim)


def _free_region(spec: SceneSpec):
    """(predicate, exact volume) of the free region at the cube center."""
    params = spec.resolved_params()
    dim = spec.dim
    ext = spec.cube_extent
    if spec.shape == "sphere":
        r = float(params["radius"])
        if r < 0 or r >= ext:
            raise InfeasibleSpec(f"sphere radius {r} must be in [0, {ext})")
        ball = math.pi * r * r if dim == 2 else 4.0 / 3.0 * math.pi * r ** 3
        return (lambda X: np.einsum("ij,ij->i", X, X) < r * r), ball
    if spec.shape == "cuboid":
        h = np.asarray(params["half_extents"], dtype=float).reshape(-1)
        if h.shape[0] != dim:
            raise InfeasibleSpec(f"cuboid needs {dim} half extents, got {h.shape[0]}")
        if (h < 0).any() or (h >= ext).any():
            raise InfeasibleSpec(f"cuboid half extents {h.tolist()} must be in [0, {ext})")
        return (lambda X: (np.abs(X) < h).all(axis=1)), float(np.prod(2.0 * h))
    if spec.shape == "cross":
        h1, h2 = (np.asarray(h, dtype=float).reshape(-1) for h in params["half_extents"])
        if h1.shape[0] != dim or h2.shape[0] != dim:
            raise InfeasibleSpec(f"cross needs two sets of {dim} half extents")
        if (h1 < 0).any() or (h2 < 0).any() or (h1 >= ext).any() or (h2 >= ext).any():
            raise InfeasibleSpec("cross half extents must be in [0, cube_extent)")
        overlap = float(np.prod(2.0 * np.minimum(h1, h2)))
        vol = float(np.prod(2.0 * h1) + np.prod(2.0 * h2) - overlap)
        pred = lambda X: ((np.abs(X) < h1).all(axis=1) | (np.abs(X) < h2).all(axis=1))
        return pred, vol
    raise ValueError(f"unknown shape {spec.shape!r}; expected one of {SHAPES}")


def generate_scene(spec: SceneSpec) -> Scene:
    """Draw the spec's cloud by rejection sampling outside the free region."""
    if spec.dim not in (2, 3):
        raise ValueError(f"dim must be 2 or 3, got {spec.dim}")
    if spec.point_count < 1:
        raise ValueError(f"point_count must be positive, got {spec.point_count}")
    if not spec.cube_extent > 0:
        raise ValueError(f"cube_extent must be positive, got {spec.cube_extent}")
    free_contains, free_volume = _free_region(spec)
    cube_volume = (2.0 * spec.cube_extent) ** spec.dim
    if free_volume >= 0.99 * cube_volume:
        raise InfeasibleSpec(
            f"free region fills {free_volume / cube_volume:.1%} of the cube; "
            "rejection sampling would stall")

    rng = np.random.default_rng(spec.seed)
    ext = spec.cube_extent
    n = spec.point_count
    batches = []
    total = 0
    for _ in range(_MAX_BATCHES):
        draw = rng.uniform(-ext, ext, size=(n, spec.dim))
        kept = draw[~free_contains(draw)]
        batches.append(kept)
        total += kept.shape[0]
        if total >= n:
            break
    else:
        raise InfeasibleSpec("practically no samples land outside the free region")
    pts = np.vstack(batches)[:n]
    return Scene(cloud=PointCloud(pts), spec=spec,
                 free_contains=free_contains, free_volume=free_volume)


def scene_free_volume_ratio(scene: Scene, poly, *, samples: int = 100_000,
                            seed: int = 0, with_diagnostic: bool = False):
    """Polytope volume over the scene's exact free volume.

    Also samples the polytope interior and reports (log level INFO) the
    fraction of samples that are either in the known-free region or beyond
    the innermost obstacle shell; pockets between obstacles legitimately
    push the ratio above 1, so the fraction is diagnostic, not asserted.
    """
    if scene.free_volume <= 0.0:
        ratio = math.inf
    else:
        ratio = poly.volume / scene.free_volume

    rng = np.random.default_rng(seed)
    lo = poly.vertices.min(axis=0)
    hi = poly.vertices.max(axis=0)
    A, b = poly.system.A, poly.system.b
    hits = []
    got = 0
    for _ in range(200):
        draw = rng.uniform(lo, hi, size=(samples, lo.shape[0]))
        inside = (draw @ A.T <= b[None, :]).all(axis=1)
        hits.append(draw[inside])
        got += int(inside.sum())
        if got >= samples:
            break
    if got == 0:
        fraction = math.nan
    else:
        S = np.vstack(hits)[:samples]
        rmin = float(np.linalg.norm(scene.cloud.points - scene.center, axis=1).min())
        ok = scene.free_contains(S - scene.center) | \
            (np.linalg.norm(S - scene.center, axis=1) >= rmin)
        fraction = float(ok.mean())
    logger.info("volume ratio %.4f; %.2f%% of polytope samples in known-free space",
                ratio, 100.0 * fraction)
    if with_diagnostic:
        return ratio, fraction
    return ratio
