import numpy as np
import pytest
from conftest import reference_star_membership, sample_in_star

from freehull import (PointCloud, QueryFrame, SceneSpec, build_star,
                      generate_scene, make_frame, star_contains,
                      star_contains_many)
from freehull.errors import DegenerateInput, NotWrapped
from freehull.star import _box_surface_points, bary_tol


def diamond_star():
    cloud = PointCloud(np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]]))
    return build_star(cloud, QueryFrame(np.zeros(2), 1.0)), cloud


def scene_star(shape="sphere", seed=0):
    scene = generate_scene(SceneSpec(shape, seed=seed))
    frame = make_frame(scene.cloud, np.zeros(3))
    return build_star(scene.cloud, frame), scene


def test_diamond_star_structure():
    star, cloud = diamond_star()
    assert star.vertex_count == 4 and star.facet_count == 4
    assert not star.injected.any()
    assert np.array_equal(np.sort(star.vertex_source), np.arange(4))
    assert star_contains(star, [0.0, 0.0])
    assert star_contains(star, [0.3, 0.3], tol=0.0)
    assert not star_contains(star, [0.6, 0.6], tol=0.0)
    # cloud points sit exactly on the boundary
    for p in cloud.points:
        assert star_contains(star, p, tol=1e-9)
        assert not star_contains(star, p, tol=-1e-9)


def test_star_vertices_copy_cloud_coordinates_bitwise():
    star, scene = scene_star()
    own = star.vertex_source >= 0
    assert own.all()
    assert np.array_equal(star.vertices, scene.cloud.points[star.vertex_source])


def test_star_apex_strictly_interior():
    star, _ = scene_star("cuboid", seed=1)
    assert star_contains(star, star.apex)
    rng = np.random.default_rng(0)
    ball = star.apex + 1e-3 * rng.normal(size=(50, 3))
    inside, _ = star_contains_many(star, ball)
    assert inside.all()


def test_star_excludes_all_cloud_points_strictly():
    star, scene = scene_star("cross", seed=2)
    scale = np.abs(scene.cloud.points).max()
    inside, _ = star_contains_many(star, scene.cloud.points, tol=-1e-9 * scale)
    assert int(inside.sum()) == 0


def test_star_membership_matches_reference_solver():
    star, scene = scene_star(seed=3)
    rng = np.random.default_rng(42)
    samples, _ = sample_in_star(star, 100, rng)
    outside = rng.uniform(-10, 10, size=(100, 3))
    pts = np.vstack([samples, outside])
    tol = bary_tol(star, 1e-9 * 10.0)
    mine, _ = star_contains_many(star, pts, tol=1e-9 * 10.0)
    ref = np.array([reference_star_membership(star, p, tol) for p in pts])
    assert np.array_equal(mine, ref)
    assert mine[:100].all()


def test_star_segment_to_apex_stays_inside():
    star, _ = scene_star("cuboid", seed=4)
    rng = np.random.default_rng(7)
    samples, hints = sample_in_star(star, 200, rng)
    for t in np.linspace(0.05, 1.0, 20):
        seg = star.apex + t * (samples - star.apex)
        inside, hints2 = star_contains_many(star, seg, tol=1e-9 * 10.0, hints=hints)
        assert inside.all()


def test_facet_simplices_nondegenerate():
    star, _ = scene_star(seed=5)
    rel = star.vertices[star.facets] - star.apex
    dets = np.abs(np.linalg.det(np.transpose(rel, (0, 2, 1))))
    assert dets.min() > 1e-12


def test_not_wrapped_raises():
    rng = np.random.default_rng(9)
    pts = rng.uniform(0.5, 3.0, size=(100, 3))      # entirely in one octant
    cloud = PointCloud(pts)
    frame = make_frame(cloud, np.zeros(3))
    with pytest.raises(NotWrapped):
        build_star(cloud, frame)


def test_bbox_injection_wraps_sparse_cloud():
    rng = np.random.default_rng(10)
    pts = rng.uniform(0.5, 3.0, size=(100, 3))
    cloud = PointCloud(pts)
    bbox = (np.full(3, -5.0), np.full(3, 5.0))
    frame = make_frame(cloud, np.zeros(3), bbox=bbox)
    star = build_star(cloud, frame)
    assert star.injected.any()
    assert (star.vertex_source[star.injected] == -1).all()
    assert (star.vertex_source[~star.injected] >= 0).all()
    # injected vertices lie exactly on the box surface
    for v in star.vertices[star.injected]:
        on_face = np.isclose(v, -5.0) | np.isclose(v, 5.0)
        assert on_face.any()
    # fan confined to the box
    assert star.vertices.min() >= -5.0 - 1e-12
    assert star.vertices.max() <= 5.0 + 1e-12


def test_box_surface_sampling_counts():
    pts3 = _box_surface_points(np.zeros(3), np.ones(3), face_grid=8, edge_samples=16)
    # 6 faces x 64 samples minus shared edges/corners
    assert pts3.shape == (296, 3)
    on_surface = np.isclose(pts3, 0.0) | np.isclose(pts3, 1.0)
    assert on_surface.any(axis=1).all()
    pts2 = _box_surface_points(np.zeros(2), np.ones(2), face_grid=8, edge_samples=16)
    assert pts2.shape == (60, 2)    # 4 edges x 16 minus 4 shared corners


def test_build_star_needs_enough_points():
    cloud = PointCloud(np.array([[1.0, 0.0], [-1.0, 0.0]]))
    with pytest.raises(DegenerateInput):
        build_star(cloud, QueryFrame(np.zeros(2), 1.0))
    # points all dropped by the 2R cut leave nothing to hull
    far = PointCloud(np.array([[4.0, 0.0], [0.0, 4.0], [-4.0, 0.0], [0.0, -4.0]]))
    with pytest.raises(DegenerateInput):
        with pytest.warns(RuntimeWarning):
            build_star(far, QueryFrame(np.zeros(2), 1.0))
