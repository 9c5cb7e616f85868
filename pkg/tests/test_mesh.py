import numpy as np
import pytest

from shocklab.errors import MeshError
from shocklab.mesh import (BOUNDARY_TAGS, TAG_INFLOW, TAG_OUTFLOW, TAG_WALL,
                           build_from_polygons, build_median_dual,
                           generate_grid, read_mesh, validate_topology,
                           write_mesh)


def unit_quad_patch(n, tag=TAG_OUTFLOW):
    """n x n uniform unit quads on [0,n]^2."""
    xs = np.arange(n + 1, dtype=float)
    nodes = np.array([(x, y) for y in xs for x in xs])
    nid = lambda i, j: j * (n + 1) + i
    polys = [(nid(i, j), nid(i + 1, j), nid(i + 1, j + 1), nid(i, j + 1))
             for j in range(n) for i in range(n)]
    tags = {}
    for i in range(n):
        tags[tuple(sorted((nid(i, 0), nid(i + 1, 0))))] = tag
        tags[tuple(sorted((nid(i, n), nid(i + 1, n))))] = tag
        tags[tuple(sorted((nid(0, i), nid(0, i + 1))))] = tag
        tags[tuple(sorted((nid(n, i), nid(n, i + 1))))] = tag
    return build_from_polygons(nodes, polys, tags)


def test_quad_grid_counts():
    m = generate_grid("quad", 4, 8, 1.0, 4.0)
    assert m.n_volumes == 32          # n_radial * n_circumferential
    assert len(m.nodes) == 45         # (nr+1) * (ntheta+1)
    assert validate_topology(m) == []


def test_regular_tri_doubles_cells():
    m = generate_grid("regular_tri", 4, 8, 1.0, 4.0)
    assert m.n_volumes == 64
    assert validate_topology(m) == []


def test_irregular_tri_deterministic():
    a = generate_grid("irregular_tri", 4, 8, 1.0, 4.0, seed=7)
    b = generate_grid("irregular_tri", 4, 8, 1.0, 4.0, seed=7)
    assert np.array_equal(a.nodes, b.nodes)
    assert np.array_equal(a.cell_nodes, b.cell_nodes)
    c = generate_grid("irregular_tri", 4, 8, 1.0, 4.0, seed=8)
    assert not np.array_equal(a.nodes, c.nodes)
    assert validate_topology(a) == []


def test_invalid_params():
    with pytest.raises(MeshError):
        generate_grid("quad", 1, 8, 1.0, 4.0)
    with pytest.raises(MeshError):
        generate_grid("quad", 4, 3, 1.0, 4.0)
    with pytest.raises(MeshError):
        generate_grid("quad", 4, 8, 4.0, 1.0)
    with pytest.raises(MeshError):
        generate_grid("hex", 4, 8, 1.0, 4.0)


@pytest.mark.parametrize("kind", ["quad", "regular_tri"])
def test_node_mirror_symmetry_exact(kind):
    m = generate_grid(kind, 6, 10, 1.0, 4.0)
    mirrored = {(x, -y) for x, y in map(tuple, m.nodes)}
    assert all((x, y) in mirrored for x, y in map(tuple, m.nodes))


def test_geometric_radial_spacing():
    m = generate_grid("quad", 10, 8, 1.0, 4.0)
    # radii along the first angular column
    r = np.hypot(m.nodes[::9, 0], m.nodes[::9, 1])
    steps = np.diff(np.sort(r))
    assert steps[-1] / steps[0] == pytest.approx(3.0, rel=1e-10)


def test_boundary_tags():
    m = generate_grid("quad", 4, 8, 1.0, 4.0)
    tags = m.face_tag[m.n_interior:]
    mids = m.face_mid[m.n_interior:]
    radii = np.hypot(mids[:, 0], mids[:, 1])
    straight = np.abs(mids[:, 0]) < 1e-12  # the two exit planes at x = 0
    assert np.all(tags[straight] == TAG_OUTFLOW)
    assert np.all(tags[~straight & (radii < 1.01)] == TAG_WALL)
    assert np.all(tags[~straight & (radii > 3.5)] == TAG_INFLOW)
    assert np.count_nonzero(tags == TAG_WALL) == 8
    assert np.count_nonzero(tags == TAG_INFLOW) == 8
    assert np.count_nonzero(tags == TAG_OUTFLOW) == 8


def test_closure_and_normals_all_grids(quad_grid, tri_grid, irr_grid):
    for m in (quad_grid, tri_grid, irr_grid):
        assert validate_topology(m) == []
        # interior face normals point left -> right
        ni = m.n_interior
        d = m.centroid[m.face_right[:ni]] - m.centroid[m.face_left[:ni]]
        dots = d[:, 0] * m.face_normal[:ni, 0] + d[:, 1] * m.face_normal[:ni, 1]
        assert np.all(dots > 0.0)


def test_validate_detects_flipped_normal(quad_grid):
    import copy
    m = copy.deepcopy(quad_grid)
    m.face_normal[0] = -m.face_normal[0]
    problems = validate_topology(m)
    assert sum("not closed" in p for p in problems) == 2  # both neighbors


def test_validate_detects_self_adjacency(quad_grid):
    import copy
    m = copy.deepcopy(quad_grid)
    m.face_right[0] = m.face_left[0]
    problems = validate_topology(m)
    assert any("twice" in p for p in problems)


def test_duplicate_edge_direction_rejected():
    nodes = np.array([(0, 0), (1, 0), (1, 1), (0, 1)], dtype=float)
    polys = [(0, 1, 2), (0, 1, 3)]  # both traverse 0->1
    with pytest.raises(MeshError):
        build_from_polygons(nodes, polys, {})


def test_median_dual_hexagons(tri_grid):
    d = build_median_dual(tri_grid)
    assert validate_topology(d) == []
    assert d.n_volumes == len(tri_grid.nodes)
    # an interior vertex of the split grid touches 6 triangles; its dual
    # volume has 6 distinct neighbors
    ntheta = tri_grid.meta["n_circumferential"]
    v = 3 * (ntheta + 1) + 5
    nbrs = set()
    for f in range(d.n_interior):
        if d.face_left[f] == v:
            nbrs.add(int(d.face_right[f]))
        if d.face_right[f] == v:
            nbrs.add(int(d.face_left[f]))
    assert len(nbrs) == 6


def test_median_dual_uniform_quad_area():
    m = unit_quad_patch(3)
    d = build_median_dual(m)
    assert validate_topology(d) == []
    # interior vertex: four quarter-cells of unit quads
    interior = [v for v in range(len(m.nodes))
                if abs(d.area[v] - 1.0) < 1e-12]
    assert len(interior) == 4  # (n-1)^2 interior vertices of a 3x3 patch


def test_median_dual_conserves_area(quad_grid, tri_grid, irr_grid):
    for m in (quad_grid, tri_grid, irr_grid):
        d = build_median_dual(m)
        assert d.area.sum() == pytest.approx(m.area.sum(), rel=1e-12)
        assert np.array_equal(d.site, m.nodes)


def test_mesh_io_roundtrip(tmp_path, irr_grid):
    path = tmp_path / "m.txt"
    write_mesh(irr_grid, path)
    back = read_mesh(path)
    assert np.array_equal(back.nodes, irr_grid.nodes)
    assert np.array_equal(back.cell_nodes, irr_grid.cell_nodes)
    assert np.array_equal(back.face_tag, irr_grid.face_tag)


def test_mesh_io_header_and_count_errors(tmp_path, quad_grid):
    path = tmp_path / "m.txt"
    write_mesh(quad_grid, path)
    lines = path.read_text().splitlines()

    bad = tmp_path / "bad.txt"
    bad.write_text("MESH3D 1\n" + "\n".join(lines[1:]) + "\n")
    with pytest.raises(MeshError):
        read_mesh(bad)

    bad.write_text("\n".join(lines[:-3]) + "\n")  # truncated
    with pytest.raises(MeshError):
        read_mesh(bad)


def test_mesh_io_index_error(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("MESH2D 1\n3 1 3\n0 0\n1 0\n0 1\n3 0 1 99\n"
                   "0 1 wall\n1 2 wall\n2 0 wall\n")
    with pytest.raises(MeshError):
        read_mesh(bad)


def test_write_mesh_rejects_polygons(tmp_path, tri_grid):
    d = build_median_dual(tri_grid)
    with pytest.raises(MeshError):
        write_mesh(d, tmp_path / "d.txt")


def test_write_17_digit_roundtrip(tmp_path):
    m = unit_quad_patch(2)
    m.nodes[0, 0] = 1.0 / 3.0  # not representable in short decimal
    # rebuild faces unaffected; just exercise the formatting
    path = tmp_path / "m.txt"
    write_mesh(m, path)
    back = read_mesh(path)
    assert back.nodes[0, 0] == m.nodes[0, 0]
