"""Cylinder O-grids, face-based topology, and median-dual control volumes.

Meshes are stored as polygon soups (nodes + CCW polygons) from which a
face-based view is derived: every face knows its left/right control volumes
and carries a unit normal pointing left -> right. The same structures serve
cell-centered (primal) and vertex-centered (median-dual) discretizations, so
the solver never branches on the control-volume placement.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import MeshError

BOUNDARY_TAGS = ("inflow", "outflow", "wall", "symmetry")
TAG_INFLOW, TAG_OUTFLOW, TAG_WALL, TAG_SYMMETRY = range(4)

GRID_KINDS = ("quad", "regular_tri", "irregular_tri")


@dataclass
class Mesh:
    """Unstructured 2D mesh with derived face topology.

    faces are ordered interior-first; `face_right` is -1 on boundary faces and
    `face_tag` is -1 on interior faces. `site` is the control volume's
    generating point (centroid for primal cells, the vertex for dual volumes)
    and is what symmetry pairing is based on.
    """

    nodes: np.ndarray          # (nn, 2)
    cell_ptr: np.ndarray       # (nc+1,) int32
    cell_nodes: np.ndarray     # (sum k,) int32, CCW
    face_nodes: np.ndarray     # (nf, 2) int32
    face_left: np.ndarray      # (nf,) int32
    face_right: np.ndarray     # (nf,) int32, -1 on boundary
    face_normal: np.ndarray    # (nf, 2) unit, left -> right
    face_length: np.ndarray    # (nf,)
    face_mid: np.ndarray       # (nf, 2)
    face_tag: np.ndarray       # (nf,) int8, -1 interior
    n_interior: int
    area: np.ndarray           # (nc,)
    centroid: np.ndarray       # (nc, 2)
    site: np.ndarray           # (nc, 2)
    meta: dict = field(default_factory=dict)

    @property
    def n_volumes(self) -> int:
        return len(self.area)

    @property
    def n_faces(self) -> int:
        return len(self.face_length)

    @property
    def n_boundary(self) -> int:
        return self.n_faces - self.n_interior

    def cell(self, i) -> np.ndarray:
        return self.cell_nodes[self.cell_ptr[i]:self.cell_ptr[i + 1]]


def _polygon_area_centroid(pts):
    x = pts[:, 0]
    y = pts[:, 1]
    xs = np.roll(x, -1)
    ys = np.roll(y, -1)
    cross = x * ys - xs * y
    area = 0.5 * np.sum(cross)
    if area <= 0.0:
        return area, pts.mean(axis=0)
    cx = np.sum((x + xs) * cross) / (6.0 * area)
    cy = np.sum((y + ys) * cross) / (6.0 * area)
    return area, np.array([cx, cy])


def build_from_polygons(nodes, polygons, boundary_tags, site=None, meta=None) -> Mesh:
    """Assemble a Mesh from CCW polygons plus a {sorted node pair: tag} map
    for boundary edges. Raises MeshError for non-positive areas, unmatched
    boundary edges, or edges shared by more than two polygons."""
    nodes = np.ascontiguousarray(nodes, dtype=np.float64)
    nc = len(polygons)
    cell_ptr = np.zeros(nc + 1, dtype=np.int32)
    for i, poly in enumerate(polygons):
        cell_ptr[i + 1] = cell_ptr[i] + len(poly)
    cell_nodes = np.fromiter(
        (v for poly in polygons for v in poly), dtype=np.int32, count=cell_ptr[-1]
    )
    if cell_nodes.size and (cell_nodes.min() < 0 or cell_nodes.max() >= len(nodes)):
        raise MeshError("polygon references a node index out of range")

    area = np.empty(nc)
    centroid = np.empty((nc, 2))
    for i, poly in enumerate(polygons):
        a, c = _polygon_area_centroid(nodes[np.asarray(poly)])
        if a <= 0.0:
            raise MeshError(f"cell {i} has non-positive area {a:.3e} (must be CCW)")
        area[i] = a
        centroid[i] = c

    # first-seen ordering keeps face numbering deterministic
    edge_map = {}  # sorted pair -> [(cell, a, b)] as traversed
    for i, poly in enumerate(polygons):
        m = len(poly)
        for k in range(m):
            a, b = int(poly[k]), int(poly[(k + 1) % m])
            if a == b:
                raise MeshError(f"cell {i} repeats node {a} on an edge")
            key = (a, b) if a < b else (b, a)
            edge_map.setdefault(key, []).append((i, a, b))

    interior, boundary = [], []
    for key, owners in edge_map.items():
        if len(owners) > 2:
            raise MeshError(f"edge {key} shared by {len(owners)} polygons")
        if len(owners) == 2:
            interior.append((key, owners))
        else:
            tag = boundary_tags.get(key)
            if tag is None:
                raise MeshError(f"boundary edge {key} has no tag")
            boundary.append((key, owners, tag))

    nf = len(interior) + len(boundary)
    face_nodes = np.empty((nf, 2), dtype=np.int32)
    face_left = np.empty(nf, dtype=np.int32)
    face_right = np.full(nf, -1, dtype=np.int32)
    face_tag = np.full(nf, -1, dtype=np.int8)

    for f, (key, owners) in enumerate(interior):
        (cl, a, b), (cr, a2, b2) = owners
        if cl == cr:
            raise MeshError(f"edge {key} lists the same cell twice")
        if (a, b) == (a2, b2):
            raise MeshError(f"edge {key} traversed twice in the same direction")
        face_nodes[f] = (a, b)
        face_left[f] = cl
        face_right[f] = cr
    for k, (key, owners, tag) in enumerate(boundary):
        f = len(interior) + k
        (cl, a, b) = owners[0]
        face_nodes[f] = (a, b)
        face_left[f] = cl
        if isinstance(tag, str):
            tag = BOUNDARY_TAGS.index(tag)
        face_tag[f] = tag

    pa = nodes[face_nodes[:, 0]]
    pb = nodes[face_nodes[:, 1]]
    d = pb - pa
    length = np.hypot(d[:, 0], d[:, 1])
    if np.any(length <= 0.0):
        raise MeshError("zero-length face")
    normal = np.empty_like(d)
    normal[:, 0] = d[:, 1] / length
    normal[:, 1] = -d[:, 0] / length

    mesh = Mesh(
        nodes=nodes,
        cell_ptr=cell_ptr,
        cell_nodes=cell_nodes,
        face_nodes=face_nodes,
        face_left=face_left,
        face_right=face_right,
        face_normal=normal,
        face_length=length,
        face_mid=0.5 * (pa + pb),
        face_tag=face_tag,
        n_interior=len(interior),
        area=area,
        centroid=centroid,
        site=centroid.copy() if site is None else np.asarray(site, dtype=np.float64),
        meta=dict(meta or {}),
    )
    return mesh


# ---------------------------------------------------------------------------
# Cylinder O-grids
# ---------------------------------------------------------------------------

def _radial_layers(n_radial, r_inner, r_outer):
    # geometric spacing, outermost layer ~3x the innermost
    growth = 3.0 ** (1.0 / (n_radial - 1)) if n_radial > 1 else 1.0
    steps = growth ** np.arange(n_radial)
    steps *= (r_outer - r_inner) / steps.sum()
    return r_inner + np.concatenate(([0.0], np.cumsum(steps)))


def _ogrid_nodes(n_radial, n_circ, r_inner, r_outer):
    """Half-annulus node array facing -x, bitwise mirror-symmetric in y."""
    radii = _radial_layers(n_radial, r_inner, r_outer)
    theta = 0.5 * np.pi + np.pi * np.arange(n_circ + 1) / n_circ
    xs = np.empty(n_circ + 1)
    ys = np.empty(n_circ + 1)
    for j in range(n_circ // 2 + 1):
        xs[j] = np.cos(theta[j])
        ys[j] = np.sin(theta[j])
        xs[n_circ - j] = xs[j]
        ys[n_circ - j] = -ys[j]
    if n_circ % 2 == 0:
        xs[n_circ // 2] = -1.0
        ys[n_circ // 2] = 0.0
    nodes = np.empty(((n_radial + 1) * (n_circ + 1), 2))
    for i, r in enumerate(radii):
        base = i * (n_circ + 1)
        nodes[base:base + n_circ + 1, 0] = r * xs
        nodes[base:base + n_circ + 1, 1] = r * ys
    return nodes


def _ogrid_boundary_tags(n_radial, n_circ, nodes):
    nid = lambda i, j: i * (n_circ + 1) + j
    tags = {}
    for j in range(n_circ):  # inner arc: slip wall
        a, b = nid(0, j), nid(0, j + 1)
        tags[(min(a, b), max(a, b))] = TAG_WALL
    for j in range(n_circ):  # outer arc: split by freestream normal direction
        a, b = nid(n_radial, j), nid(n_radial, j + 1)
        mid = 0.5 * (nodes[a] + nodes[b])
        outward_x = mid[0] / np.hypot(mid[0], mid[1])
        tag = TAG_INFLOW if outward_x < 0.0 else TAG_OUTFLOW
        tags[(min(a, b), max(a, b))] = tag
    for i in range(n_radial):  # the two straight exit planes
        for j in (0, n_circ):
            a, b = nid(i, j), nid(i + 1, j)
            tags[(min(a, b), max(a, b))] = TAG_OUTFLOW
    return tags


def generate_grid(kind, n_radial, n_circumferential, r_cylinder=1.0,
                  r_outer=4.0, seed=0) -> Mesh:
    """Half-annulus O-grid around a cylinder at the origin, facing -x flow.

    quad: structured quadrilaterals; regular_tri: each quad split along the
    same diagonal sense; irregular_tri: regular_tri with seeded interior-node
    perturbation (<= 0.2 of the local edge length).
    """
    if kind not in GRID_KINDS:
        raise MeshError(f"unknown grid kind {kind!r}")
    if n_radial < 2 or n_circumferential < 4:
        raise MeshError("need n_radial >= 2 and n_circumferential >= 4")
    if not (r_outer > r_cylinder > 0.0):
        raise MeshError("need r_outer > r_cylinder > 0")

    nr, ntheta = n_radial, n_circumferential
    nodes = _ogrid_nodes(nr, ntheta, r_cylinder, r_outer)
    tags = _ogrid_boundary_tags(nr, ntheta, nodes)
    nid = lambda i, j: i * (ntheta + 1) + j

    polys = []
    for i in range(nr):
        for j in range(ntheta):
            q = (nid(i, j), nid(i + 1, j), nid(i + 1, j + 1), nid(i, j + 1))
            if kind == "quad":
                polys.append(q)
            else:
                polys.append((q[0], q[1], q[2]))
                polys.append((q[0], q[2], q[3]))

    meta = {
        "kind": kind,
        "n_radial": nr,
        "n_circumferential": ntheta,
        "r_cylinder": float(r_cylinder),
        "r_outer": float(r_outer),
    }

    if kind != "irregular_tri":
        return build_from_polygons(nodes, polys, tags, meta=meta)

    meta["seed"] = int(seed)
    interior = np.ones(len(nodes), dtype=bool)
    for i in range(nr + 1):
        for j in range(ntheta + 1):
            if i in (0, nr) or j in (0, ntheta):
                interior[nid(i, j)] = False

    # shortest incident edge per node, from the unperturbed triangulation
    local = np.full(len(nodes), np.inf)
    for poly in polys:
        for k in range(3):
            a, b = poly[k], poly[(k + 1) % 3]
            ln = np.hypot(*(nodes[a] - nodes[b]))
            local[a] = min(local[a], ln)
            local[b] = min(local[b], ln)

    rng = np.random.default_rng(seed)
    amplitude = 0.2
    for _ in range(10):
        pert = nodes.copy()
        idx = np.flatnonzero(interior)
        ang = rng.uniform(0.0, 2.0 * np.pi, size=len(idx))
        mag = rng.uniform(0.0, amplitude, size=len(idx)) * local[idx]
        pert[idx, 0] += mag * np.cos(ang)
        pert[idx, 1] += mag * np.sin(ang)
        try:
            return build_from_polygons(pert, polys, tags, meta=meta)
        except MeshError:
            amplitude *= 0.5
    raise MeshError("could not build a valid irregular grid after 10 retries")


# ---------------------------------------------------------------------------
# Median dual
# ---------------------------------------------------------------------------

def build_median_dual(mesh: Mesh) -> Mesh:
    """Vertex-centered control volumes: for every primal vertex, the polygon
    through incident cell centroids and edge midpoints (closed along half
    boundary edges for boundary vertices). The result is a regular Mesh, so
    the solver code is identical for both discretizations."""
    nn = len(mesh.nodes)
    nc = mesh.n_volumes

    # primal edge bookkeeping from the face arrays (faces = primal edges)
    edge_key = [(min(a, b), max(a, b)) for a, b in mesh.face_nodes]
    edge_index = {k: f for f, k in enumerate(edge_key)}
    edge_cells = {}
    for f, k in enumerate(edge_key):
        cells = [int(mesh.face_left[f])]
        if mesh.face_right[f] >= 0:
            cells.append(int(mesh.face_right[f]))
        edge_cells[k] = cells

    # dual nodes: centroids | edge midpoints | boundary vertex copies
    n_edges = mesh.n_faces
    dual_nodes = [mesh.centroid, mesh.face_mid]
    mid_id = lambda k: nc + edge_index[k]
    boundary_vertex = {}
    bpoints = []
    for f in range(mesh.n_interior, mesh.n_faces):
        for v in mesh.face_nodes[f]:
            v = int(v)
            if v not in boundary_vertex:
                boundary_vertex[v] = nc + n_edges + len(bpoints)
                bpoints.append(mesh.nodes[v])
    if bpoints:
        dual_nodes.append(np.asarray(bpoints))
    dual_nodes = np.vstack(dual_nodes)

    # per (cell, vertex): previous/next node in the CCW polygon
    incident = [[] for _ in range(nn)]
    around = {}
    for c in range(nc):
        poly = mesh.cell(c)
        m = len(poly)
        for k in range(m):
            v = int(poly[k])
            incident[v].append(c)
            around[(c, v)] = (int(poly[(k - 1) % m]), int(poly[(k + 1) % m]))

    def skey(a, b):
        return (a, b) if a < b else (b, a)

    btag = {}
    for f in range(mesh.n_interior, mesh.n_faces):
        btag[skey(int(mesh.face_nodes[f, 0]), int(mesh.face_nodes[f, 1]))] = int(
            mesh.face_tag[f]
        )

    polys = []
    sites = []
    dual_tags = {}
    for v in range(nn):
        cells = incident[v]
        if not cells:
            raise MeshError(f"vertex {v} has no incident cell")
        on_boundary = v in boundary_vertex
        if on_boundary:
            start = None
            for c in cells:
                _, nxt = around[(c, v)]
                if skey(v, nxt) in btag:
                    start = c
                    break
            if start is None:
                raise MeshError(f"boundary vertex {v} has no boundary leaving edge")
        else:
            start = min(cells)

        poly = []
        if on_boundary:
            vp = boundary_vertex[v]
            _, nxt = around[(start, v)]
            kb = skey(v, nxt)
            poly.append(vp)
            poly.append(mid_id(kb))
            dual_tags[skey(vp, mid_id(kb))] = btag[kb]
        else:
            _, nxt = around[(start, v)]
            poly.append(mid_id(skey(v, nxt)))

        c = start
        visited = 0
        while True:
            visited += 1
            if visited > len(cells) + 1:
                raise MeshError(f"walk around vertex {v} did not close")
            poly.append(c)  # centroid id == cell id
            prv, _ = around[(c, v)]
            ke = skey(prv, v)
            adj = edge_cells[ke]
            if len(adj) == 1:  # entering edge on the boundary: stop and close
                if not on_boundary:
                    raise MeshError(f"interior vertex {v} hit a boundary edge")
                poly.append(mid_id(ke))
                dual_tags[skey(boundary_vertex[v], mid_id(ke))] = btag[ke]
                break
            c_next = adj[0] if adj[1] == c else adj[1]
            if c_next == start and not on_boundary:
                break
            poly.append(mid_id(ke))
            c = c_next
        polys.append(poly)
        sites.append(mesh.nodes[v])

    meta = dict(mesh.meta)
    meta["dual"] = True
    return build_from_polygons(dual_nodes, polys, dual_tags,
                               site=np.asarray(sites), meta=meta)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def validate_topology(mesh: Mesh):
    """Check all Mesh invariants; returns a list of violation strings."""
    problems = []
    nf, ni, nc = mesh.n_faces, mesh.n_interior, mesh.n_volumes

    if np.any(mesh.area <= 0.0):
        problems.append("non-positive control volume area")
    if np.any(mesh.face_length <= 0.0):
        problems.append("non-positive face length")

    nrm = np.hypot(mesh.face_normal[:, 0], mesh.face_normal[:, 1])
    bad = np.flatnonzero(np.abs(nrm - 1.0) > 1e-12)
    if bad.size:
        problems.append(f"{bad.size} face normals are not unit length")

    for f in range(ni):
        l, r = mesh.face_left[f], mesh.face_right[f]
        if l == r:
            problems.append(f"interior face {f} references volume {l} twice")
        if not (0 <= l < nc and 0 <= r < nc):
            problems.append(f"interior face {f} adjacency out of range")
    for f in range(ni, nf):
        if mesh.face_right[f] != -1:
            problems.append(f"boundary face {f} has a right volume")
        if mesh.face_tag[f] < 0:
            problems.append(f"boundary face {f} has no tag")

    # geometric closure: outward normals around each volume sum to zero
    acc = np.zeros((nc, 2))
    per = np.zeros(nc)
    nl = mesh.face_normal * mesh.face_length[:, None]
    np.add.at(acc, mesh.face_left, nl)
    np.add.at(per, mesh.face_left, mesh.face_length)
    ok = mesh.face_right >= 0
    np.add.at(acc, mesh.face_right[ok], -nl[ok])
    np.add.at(per, mesh.face_right[ok], mesh.face_length[ok])
    gap = np.hypot(acc[:, 0], acc[:, 1])
    bad = np.flatnonzero(gap > 1e-12 * np.maximum(per, 1e-300))
    for i in bad[:10]:
        problems.append(f"volume {i} is not closed (defect {gap[i]:.3e})")
    if bad.size > 10:
        problems.append(f"... and {bad.size - 10} more unclosed volumes")
    return problems


# ---------------------------------------------------------------------------
# ASCII mesh file
# ---------------------------------------------------------------------------

def write_mesh(mesh: Mesh, path):
    """ASCII format: header, counts, nodes (17 significant digits), cells,
    boundary faces. Only triangle/quad primal meshes are writeable."""
    ks = np.diff(mesh.cell_ptr)
    if np.any((ks < 3) | (ks > 4)):
        raise MeshError("mesh file format supports k in {3,4} cells only")
    lines = ["MESH2D 1"]
    lines.append(f"{len(mesh.nodes)} {mesh.n_volumes} {mesh.n_boundary}")
    for x, y in mesh.nodes:
        lines.append(f"{x:.17g} {y:.17g}")
    for i in range(mesh.n_volumes):
        poly = mesh.cell(i)
        lines.append(f"{len(poly)} " + " ".join(str(int(v)) for v in poly))
    for f in range(mesh.n_interior, mesh.n_faces):
        a, b = mesh.face_nodes[f]
        lines.append(f"{a} {b} {BOUNDARY_TAGS[mesh.face_tag[f]]}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_mesh(path) -> Mesh:
    with open(path) as fh:
        raw = [ln.strip() for ln in fh if ln.strip()]
    if not raw or raw[0].split() != ["MESH2D", "1"]:
        raise MeshError("bad mesh file header (expected 'MESH2D 1')")
    try:
        nn, nc, nb = (int(t) for t in raw[1].split())
    except (ValueError, IndexError) as exc:
        raise MeshError("bad count line") from exc
    need = 2 + nn + nc + nb
    if len(raw) != need:
        raise MeshError(f"expected {need} lines, found {len(raw)}")

    nodes = np.empty((nn, 2))
    for i in range(nn):
        parts = raw[2 + i].split()
        if len(parts) != 2:
            raise MeshError(f"bad node line {i}")
        nodes[i] = (float(parts[0]), float(parts[1]))

    polys = []
    for i in range(nc):
        parts = [int(t) for t in raw[2 + nn + i].split()]
        if not parts or parts[0] not in (3, 4) or len(parts) != parts[0] + 1:
            raise MeshError(f"bad cell line {i}")
        poly = parts[1:]
        if any(not (0 <= v < nn) for v in poly):
            raise MeshError(f"cell {i} node index out of range")
        polys.append(tuple(poly))

    tags = {}
    for i in range(nb):
        parts = raw[2 + nn + nc + i].split()
        if len(parts) != 3 or parts[2] not in BOUNDARY_TAGS:
            raise MeshError(f"bad boundary line {i}")
        a, b = int(parts[0]), int(parts[1])
        if not (0 <= a < nn and 0 <= b < nn):
            raise MeshError(f"boundary line {i} node index out of range")
        tags[(min(a, b), max(a, b))] = BOUNDARY_TAGS.index(parts[2])

    return build_from_polygons(nodes, polys, tags, meta={"kind": "file"})
