"""Large obstacle-free convex polytopes directly from point clouds.

The pipeline: flip the cloud through a sphere around the query, take the
convex hull of the image to find the points visible from the query, fan
them into a star-shaped region, then push each hull facet inward past the
notches to obtain a convex polytope that provably contains no cloud point.
"""

from . import errors
from .bench import BenchReport, BenchRow, run_benchmark
from .errors import (CorridorGap, DegenerateInput, DimensionMismatch,
                     DomainError, EmptyCloud, FreehullError, InfeasibleSpec,
                     InvalidRotation, NotInterior, NotWrapped, ParseError,
                     PathBlocked, QueryInsideObstacle, Unbounded)
from .convexify import (FreePolytope, PipelineStats, generate_free_polytope,
                        modify_to_convex, run_pipeline, transform_polytope)
from .corridor import (Corridor, CorridorStats, ReferencePath, corridor_stats,
                       generate_corridor)
from .flip import (FlippedCloud, QueryFrame, auto_radius, flip, make_frame,
                   unflip, unflip_many)
from .geometry import (HalfSpaceSystem, Hull, PointCloud, axis_box_system,
                       contains, convex_hull, enumerate_vertices,
                       polytope_volume, remove_redundant)
from .io import (load_scene_specs, read_cloud, read_path, read_polytope,
                 write_cloud, write_polytope)
from .kernels import COMPILED
from .scenes import Scene, SceneSpec, generate_scene, scene_free_volume_ratio
from .star import StarPolytope, build_star, star_contains, star_contains_many

__version__ = "0.1.0"

__all__ = [
    "BenchReport", "BenchRow", "COMPILED", "Corridor", "CorridorGap",
    "CorridorStats", "DegenerateInput", "DimensionMismatch", "DomainError",
    "EmptyCloud", "FlippedCloud", "FreePolytope", "FreehullError",
    "HalfSpaceSystem", "Hull", "InfeasibleSpec", "InvalidRotation",
    "NotInterior", "NotWrapped", "ParseError", "PathBlocked",
    "PipelineStats", "PointCloud", "QueryFrame", "QueryInsideObstacle",
    "ReferencePath", "Scene", "SceneSpec", "StarPolytope", "Unbounded",
    "auto_radius", "axis_box_system",
    "build_star", "contains", "convex_hull", "corridor_stats", "errors",
    "enumerate_vertices", "flip", "generate_corridor",
    "generate_free_polytope", "generate_scene", "load_scene_specs",
    "make_frame", "modify_to_convex", "polytope_volume", "read_cloud",
    "read_path", "read_polytope", "remove_redundant", "run_benchmark",
    "run_pipeline", "scene_free_volume_ratio", "star_contains",
    "star_contains_many", "transform_polytope", "unflip", "unflip_many",
    "write_cloud", "write_polytope",
]
