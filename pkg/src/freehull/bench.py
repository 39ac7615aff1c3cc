"""Benchmark harness: scene specs in, one metrics row per scene and rep."""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field

import numpy as np

from .convexify import run_pipeline
from .errors import FreehullError
from .flip import make_frame
from .io import load_scene_specs
from .scenes import generate_scene, scene_free_volume_ratio

logger = logging.getLogger(__name__)

COLUMNS = ("scene_id", "seed", "point_count", "volume", "volume_ratio",
           "polytope_vertex_count", "hyperplane_count", "star_build_ms",
           "convexify_ms", "total_ms", "safety_repairs")


@dataclass
class BenchRow:
    scene_id: str
    seed: int
    point_count: int
    volume: float
    volume_ratio: float
    polytope_vertex_count: int
    hyperplane_count: int
    star_build_ms: float
    convexify_ms: float
    total_ms: float
    safety_repairs: int

    def as_tuple(self):
        return (self.scene_id, self.seed, self.point_count, self.volume,
                self.volume_ratio, self.polytope_vertex_count,
                self.hyperplane_count, self.star_build_ms, self.convexify_ms,
                self.total_ms, self.safety_repairs)


@dataclass
class BenchReport:
    rows: list = field(default_factory=list)
    errors: list = field(default_factory=list)      # (scene_id, message)

    def to_csv(self, path) -> None:
        """Write the report; floats keep full round-trip precision."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(COLUMNS)
            for row in self.rows:
                writer.writerow([v if isinstance(v, str) else repr(v)
                                 for v in row.as_tuple()])


def run_benchmark(spec_file, repetitions: int = 1, *, gamma: float = 1.0,
                  ratio_samples: int = 100_000) -> BenchReport:
    """Generate every spec's scene once, run the pipeline per repetition.

    A scene or pipeline failure is recorded in report.errors and skipped;
    the remaining rows keep (scene, seed, rep) order.  The cloud is drawn
    once per spec, so volumes repeat across repetitions and only the
    timing columns jitter.
    """
    if repetitions < 1:
        raise ValueError(f"repetitions must be positive, got {repetitions}")
    report = BenchReport()
    for spec in load_scene_specs(spec_file):
        scene_id = spec.scene_id()
        try:
            scene = generate_scene(spec)
        except FreehullError as exc:
            logger.warning("scene %s (seed %d) failed: %s", scene_id, spec.seed, exc)
            report.errors.append((scene_id, str(exc)))
            continue
        query = np.zeros(spec.dim)
        for _ in range(repetitions):
            try:
                frame = make_frame(scene.cloud, query, gamma=gamma)
                poly, stats, _ = run_pipeline(scene.cloud, frame)
                ratio = scene_free_volume_ratio(scene, poly, samples=ratio_samples)
            except FreehullError as exc:
                logger.warning("pipeline on %s (seed %d) failed: %s",
                               scene_id, spec.seed, exc)
                report.errors.append((scene_id, str(exc)))
                continue
            report.rows.append(BenchRow(
                scene_id=scene_id, seed=spec.seed,
                point_count=len(scene.cloud),
                volume=poly.volume, volume_ratio=ratio,
                polytope_vertex_count=int(poly.vertices.shape[0]),
                hyperplane_count=poly.hyperplane_count,
                star_build_ms=stats.star_build_ms,
                convexify_ms=stats.convexify_ms,
                total_ms=stats.total_ms,
                safety_repairs=poly.safety_repairs))
    return report
