"""Tests for readers and writers: clouds, polytopes, paths, scene specs."""

import json

import numpy as np
import pytest

from freehull import (DimensionMismatch, ParseError, PointCloud,
                      generate_free_polytope, make_frame)
from freehull.io import (SEED_ENV, load_scene_specs, read_cloud, read_path,
                         read_polytope, write_cloud, write_polytope)


# ---------------------------------------------------------------------------
# CSV clouds


def test_csv_cloud_round_trip_is_exact(tmp_path):
    pts = np.random.default_rng(0).normal(size=(50, 3)) * 1e3
    f = tmp_path / "cloud.csv"
    write_cloud(PointCloud(pts), f)
    back = read_cloud(f)
    assert np.array_equal(back.points, pts)


def test_csv_header_and_blank_lines(tmp_path):
    f = tmp_path / "cloud.csv"
    f.write_text("x,y\n\n1.0,2.0\n\n3.0,4.0\n")
    cloud = read_cloud(f)
    assert np.array_equal(cloud.points, [[1.0, 2.0], [3.0, 4.0]])


def test_csv_bad_token_reports_line(tmp_path):
    f = tmp_path / "c.csv"
    f.write_text("1,2\n3,oops\n")
    with pytest.raises(ParseError, match="c.csv:2"):
        read_cloud(f)


def test_csv_header_not_allowed_midfile(tmp_path):
    f = tmp_path / "c.csv"
    f.write_text("1,2\nx,y\n")
    with pytest.raises(ParseError, match="c.csv:2"):
        read_cloud(f)


def test_csv_ragged_rows(tmp_path):
    f = tmp_path / "c.csv"
    f.write_text("1,2,3\n4,5\n")
    with pytest.raises(DimensionMismatch, match="c.csv:2"):
        read_cloud(f)
    f.write_text("1,2,3,4\n")
    with pytest.raises(ParseError, match="2 or 3 columns"):
        read_cloud(f)


def test_csv_empty_file(tmp_path):
    f = tmp_path / "c.csv"
    f.write_text("x,y,z\n")
    with pytest.raises(ParseError, match="no points"):
        read_cloud(f)


# ---------------------------------------------------------------------------
# PLY clouds


PLY_3D = """\
ply
format ascii 1.0
comment made by hand
element vertex 3
property float x
property float y
property float z
end_header
0 0 0
1.5 0 0
0 2.5 0
"""


def test_ply_basic(tmp_path):
    f = tmp_path / "c.ply"
    f.write_text(PLY_3D)
    cloud = read_cloud(f)
    assert np.array_equal(cloud.points, [[0, 0, 0], [1.5, 0, 0], [0, 2.5, 0]])


def test_ply_extension_detection_and_explicit_fmt(tmp_path):
    f = tmp_path / "c.PLY"
    f.write_text(PLY_3D)
    assert read_cloud(f).points.shape == (3, 3)
    g = tmp_path / "c.dat"
    g.write_text(PLY_3D)
    assert read_cloud(g, fmt="ply").points.shape == (3, 3)
    with pytest.raises(ParseError):        # falls back to csv
        read_cloud(g)
    with pytest.raises(ValueError, match="unknown cloud format"):
        read_cloud(g, fmt="xyz")


def test_ply_reordered_and_extra_properties(tmp_path):
    f = tmp_path / "c.ply"
    f.write_text("ply\nformat ascii 1.0\nelement vertex 2\n"
                 "property float z\nproperty uchar red\nproperty float x\n"
                 "property float y\nend_header\n"
                 "9 255 1 2\n8 0 3 4\n")
    cloud = read_cloud(f)
    assert np.array_equal(cloud.points, [[1, 2, 9], [3, 4, 8]])


def test_ply_2d_vertices(tmp_path):
    f = tmp_path / "c.ply"
    f.write_text("ply\nformat ascii 1.0\nelement vertex 2\n"
                 "property float x\nproperty float y\nend_header\n"
                 "1 2\n3 4\n")
    assert read_cloud(f).dim == 2


def test_ply_skips_other_elements(tmp_path):
    f = tmp_path / "c.ply"
    f.write_text("ply\nformat ascii 1.0\n"
                 "element face 2\nproperty list uchar int vertex_indices\n"
                 "element vertex 2\nproperty float x\nproperty float y\n"
                 "property float z\nend_header\n"
                 "3 0 1 2\n3 2 1 0\n"
                 "1 2 3\n4 5 6\n")
    cloud = read_cloud(f)
    assert np.array_equal(cloud.points, [[1, 2, 3], [4, 5, 6]])


def test_ply_error_cases(tmp_path):
    f = tmp_path / "c.ply"
    f.write_text("solid nope\n")
    with pytest.raises(ParseError, match="missing 'ply' magic"):
        read_cloud(f)
    f.write_text("ply\nformat binary_little_endian 1.0\nend_header\n")
    with pytest.raises(ParseError, match="only ASCII"):
        read_cloud(f)
    f.write_text("ply\nformat ascii 1.0\nelement vertex 2\n"
                 "property float x\nproperty float y\n")
    with pytest.raises(ParseError, match="without end_header"):
        read_cloud(f)
    f.write_text("ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\n"
                 "property float y\nend_header\n1 2\n")
    with pytest.raises(ParseError, match="ends after 1 of 2"):
        read_cloud(f)
    f.write_text("ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\n"
                 "property float y\nend_header\n1\n")
    with pytest.raises(ParseError, match="header declares 2"):
        read_cloud(f)
    f.write_text("ply\nformat ascii 1.0\nelement face 1\n"
                 "property float x\nend_header\n1\n")
    with pytest.raises(ParseError, match="no vertex element"):
        read_cloud(f)
    f.write_text("ply\nformat ascii 1.0\nelement vertex 1\n"
                 "property float nx\nend_header\n1\n")
    with pytest.raises(ParseError, match="lacks x/y"):
        read_cloud(f)


# ---------------------------------------------------------------------------
# polytopes


@pytest.fixture(scope="module")
def small_poly():
    rng = np.random.default_rng(5)
    pts = rng.uniform(-10.0, 10.0, size=(500, 3))
    pts = pts[np.linalg.norm(pts, axis=1) > 2.0]
    cloud = PointCloud(pts)
    return generate_free_polytope(cloud, make_frame(cloud, np.zeros(3)))


def test_polytope_json_round_trip_is_exact(tmp_path, small_poly):
    f = tmp_path / "poly.json"
    sidecar = write_polytope(small_poly, f)
    back = read_polytope(f)
    assert np.array_equal(back.system.A, small_poly.system.A)
    assert np.array_equal(back.system.b, small_poly.system.b)
    assert np.array_equal(back.vertices, small_poly.vertices)
    assert np.array_equal(back.interior, small_poly.interior)
    assert back.volume == small_poly.volume
    assert back.hyperplane_count == small_poly.hyperplane_count
    assert sidecar == tmp_path / "poly.obj"


def test_obj_sidecar_is_a_triangle_mesh(tmp_path, small_poly):
    sidecar = write_polytope(small_poly, tmp_path / "poly.json")
    lines = sidecar.read_text().splitlines()
    v_lines = [l for l in lines if l.startswith("v ")]
    f_lines = [l for l in lines if l.startswith("f ")]
    assert len(v_lines) == small_poly.vertices.shape[0]
    assert len(f_lines) >= 4
    for l in f_lines:
        idx = [int(t) for t in l.split()[1:]]
        assert len(idx) == 3
        assert all(1 <= i <= len(v_lines) for i in idx)
    first = np.array([float(t) for t in v_lines[0].split()[1:]])
    assert np.array_equal(first, small_poly.vertices[0])


def test_no_obj_sidecar_in_2d(tmp_path):
    rng = np.random.default_rng(6)
    pts = rng.uniform(-10.0, 10.0, size=(300, 2))
    pts = pts[np.linalg.norm(pts, axis=1) > 2.0]
    cloud = PointCloud(pts)
    poly = generate_free_polytope(cloud, make_frame(cloud, np.zeros(2)))
    assert write_polytope(poly, tmp_path / "p2.json") is None
    assert not (tmp_path / "p2.obj").exists()
    assert read_polytope(tmp_path / "p2.json").dim == 2


def test_read_polytope_errors(tmp_path):
    f = tmp_path / "p.json"
    f.write_text("{not json")
    with pytest.raises(ParseError, match="invalid JSON"):
        read_polytope(f)
    f.write_text(json.dumps({"dim": 2, "A": [[1.0, 0.0]]}))
    with pytest.raises(ParseError, match="missing fields"):
        read_polytope(f)
    doc = {"dim": 3, "A": [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]],
           "b": [1.0, 1.0, 1.0, 1.0],
           "vertices": [[1.0, 1.0], [-1.0, 1.0], [1.0, -1.0], [-1.0, -1.0]],
           "interior": [0.0, 0.0], "volume": 4.0}
    f.write_text(json.dumps(doc))
    with pytest.raises(DimensionMismatch, match="dim field says 3"):
        read_polytope(f)
    doc["dim"] = 2
    doc["b"] = [1.0, "bad", 1.0, 1.0]
    f.write_text(json.dumps(doc))
    with pytest.raises(ParseError):
        read_polytope(f)


# ---------------------------------------------------------------------------
# paths


def test_read_path(tmp_path):
    f = tmp_path / "path.txt"
    f.write_text("# a comment\n0.0 1 2 3\n\n1.5 4 5 6\n")
    path = read_path(f)
    assert np.array_equal(path.times, [0.0, 1.5])
    assert np.array_equal(path.points, [[1, 2, 3], [4, 5, 6]])
    assert path.dim == 3


def test_read_path_errors(tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("0 1\n")
    with pytest.raises(ParseError, match="'t x y"):
        read_path(f)
    f.write_text("0 1 2\n1 x 2\n")
    with pytest.raises(ParseError, match="p.txt:2"):
        read_path(f)
    f.write_text("0 1 2\n1 1 2 3\n")
    with pytest.raises(DimensionMismatch, match="p.txt:2"):
        read_path(f)
    f.write_text("# nothing\n")
    with pytest.raises(ParseError, match="no waypoints"):
        read_path(f)
    f.write_text("1 0 0\n0 1 1\n")      # times not increasing
    with pytest.raises(ParseError, match="strictly increasing"):
        read_path(f)


# ---------------------------------------------------------------------------
# scene spec files


def test_load_scene_specs_single_and_list(tmp_path):
    f = tmp_path / "one.json"
    f.write_text(json.dumps({"shape": "sphere", "seed": 3, "dim": 2}))
    (spec,) = load_scene_specs(f)
    assert (spec.shape, spec.seed, spec.dim) == ("sphere", 3, 2)

    g = tmp_path / "many.json"
    g.write_text(json.dumps([
        {"shape": "sphere", "seeds": [0, 1, 2], "point_count": 100},
        {"shape": "cross"},
    ]))
    specs = load_scene_specs(g)
    assert [s.seed for s in specs] == [0, 1, 2, 0]
    assert [s.shape for s in specs] == ["sphere"] * 3 + ["cross"]
    assert specs[0].point_count == 100 and specs[3].point_count == 3600


def test_load_scene_specs_rejects_junk(tmp_path):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"shape": "sphere", "radius": 2.0}))
    with pytest.raises(ParseError, match="unknown keys.*radius"):
        load_scene_specs(f)
    f.write_text(json.dumps({"seed": 0}))
    with pytest.raises(ParseError, match="lacks 'shape'"):
        load_scene_specs(f)
    f.write_text(json.dumps([42]))
    with pytest.raises(ParseError, match="not an object"):
        load_scene_specs(f)
    f.write_text(json.dumps({"shape": "sphere", "seeds": 7}))
    with pytest.raises(ParseError, match="'seeds' must be a list"):
        load_scene_specs(f)
    f.write_text("[")
    with pytest.raises(ParseError, match="invalid JSON"):
        load_scene_specs(f)


def test_seed_env_overrides_every_seed(tmp_path, monkeypatch):
    f = tmp_path / "s.json"
    f.write_text(json.dumps({"shape": "cuboid", "seeds": [4, 5]}))
    monkeypatch.setenv(SEED_ENV, "99")
    specs = load_scene_specs(f)
    assert [s.seed for s in specs] == [99, 99]
    monkeypatch.setenv(SEED_ENV, "nope")
    with pytest.raises(ParseError, match="not an integer"):
        load_scene_specs(f)
    monkeypatch.delenv(SEED_ENV)
    assert [s.seed for s in load_scene_specs(f)] == [4, 5]
