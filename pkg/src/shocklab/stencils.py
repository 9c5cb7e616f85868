"""Precomputed stencil structures for gradients, limiters and indicators.

Built once per mesh and cached on it. Entry layout is CSR-like but kernels
only need the flat per-entry arrays plus the owning cell of each entry
(`rows`), so no pointer arrays are carried around.
"""

from dataclasses import dataclass

import numpy as np

from .mesh import Mesh


@dataclass
class Stencils:
    # one entry per (cell, face) incidence; src >= 0 is the neighbor volume,
    # src < 0 encodes boundary-face index -src-1 (ghost value slot)
    rows: np.ndarray
    src: np.ndarray
    dxf: np.ndarray   # face midpoint - centroid[row]
    dyf: np.ndarray
    # least-squares gradient coefficients over interior neighbors only
    own_rows: np.ndarray
    own_cols: np.ndarray
    own_cx: np.ndarray
    own_cy: np.ndarray
    # least-squares coefficients when reflected boundary ghosts participate
    wg_rows: np.ndarray
    wg_cols: np.ndarray
    wg_cx: np.ndarray
    wg_cy: np.ndarray
    gh_rows: np.ndarray
    gh_cols: np.ndarray   # boundary face index
    gh_cx: np.ndarray
    gh_cy: np.ndarray
    ghost_point: np.ndarray  # (nb, 2) reflected centroids
    # corner (vertex) incidences for MLP limiting
    crows: np.ndarray
    cverts: np.ndarray
    dxv: np.ndarray
    dyv: np.ndarray
    vrows: np.ndarray   # vertex id per (vertex, cell) incidence
    vcells: np.ndarray
    n_vertices: int
    h: np.ndarray       # sqrt(area), limiter length scale
    lsq_singular: int   # cells that fell back to zero gradient


def _lsq_coefficients(rows, dx, dy, n):
    """Inverse-distance-weighted normal equations per cell; singular stencils
    get zero coefficients (zero-gradient fallback)."""
    w2 = 1.0 / (dx * dx + dy * dy)
    g00 = np.bincount(rows, weights=w2 * dx * dx, minlength=n)
    g01 = np.bincount(rows, weights=w2 * dx * dy, minlength=n)
    g11 = np.bincount(rows, weights=w2 * dy * dy, minlength=n)
    det = g00 * g11 - g01 * g01
    tr2 = (g00 + g11) ** 2
    ok = det > 1e-10 * np.maximum(tr2, 1e-300)
    safe = np.where(ok, det, 1.0)
    i00 = np.where(ok, g11 / safe, 0.0)
    i01 = np.where(ok, -g01 / safe, 0.0)
    i11 = np.where(ok, g00 / safe, 0.0)
    cx = (i00[rows] * dx + i01[rows] * dy) * w2
    cy = (i01[rows] * dx + i11[rows] * dy) * w2
    return cx, cy, int(np.count_nonzero(~ok))


def build_stencils(mesh: Mesh) -> Stencils:
    nf, ni, n = mesh.n_faces, mesh.n_interior, mesh.n_volumes
    cen = mesh.centroid

    rows_l = mesh.face_left
    rows_r = mesh.face_right[:ni]
    rows = np.concatenate([rows_l, rows_r]).astype(np.int32)
    src = np.concatenate([
        np.where(np.arange(nf) < ni, mesh.face_right,
                 -(np.arange(nf) - ni) - 1),
        mesh.face_left[:ni],
    ]).astype(np.int32)
    mids = np.concatenate([mesh.face_mid, mesh.face_mid[:ni]], axis=0)
    dxf = mids[:, 0] - cen[rows, 0]
    dyf = mids[:, 1] - cen[rows, 1]

    # interior-neighbor LSQ entries (both directions of every interior face)
    orows = np.concatenate([mesh.face_left[:ni], mesh.face_right[:ni]])
    ocols = np.concatenate([mesh.face_right[:ni], mesh.face_left[:ni]])
    odx = cen[ocols, 0] - cen[orows, 0]
    ody = cen[ocols, 1] - cen[orows, 1]
    own_cx, own_cy, sing = _lsq_coefficients(orows, odx, ody, n)

    # ghost-augmented LSQ: reflect the interior centroid across the face
    bl = mesh.face_left[ni:]
    d = mesh.face_mid[ni:] - cen[bl]
    nrm = mesh.face_normal[ni:]
    dist = d[:, 0] * nrm[:, 0] + d[:, 1] * nrm[:, 1]
    ghost_point = cen[bl] + 2.0 * dist[:, None] * nrm

    grows = bl.astype(np.int32)
    gcols = np.arange(nf - ni, dtype=np.int32)
    wrows = np.concatenate([orows, grows])
    wdx = np.concatenate([odx, ghost_point[:, 0] - cen[bl, 0]])
    wdy = np.concatenate([ody, ghost_point[:, 1] - cen[bl, 1]])
    wcx, wcy, _ = _lsq_coefficients(wrows, wdx, wdy, n)
    ne = len(orows)

    # corner incidences from the polygons
    crows = np.repeat(
        np.arange(n, dtype=np.int32), np.diff(mesh.cell_ptr).astype(np.int64)
    )
    cverts = mesh.cell_nodes.astype(np.int32)
    dxv = mesh.nodes[cverts, 0] - cen[crows, 0]
    dyv = mesh.nodes[cverts, 1] - cen[crows, 1]

    order = np.argsort(cverts, kind="stable")
    vrows = cverts[order]
    vcells = crows[order]

    return Stencils(
        rows=rows, src=src, dxf=dxf, dyf=dyf,
        own_rows=orows.astype(np.int32), own_cols=ocols.astype(np.int32),
        own_cx=own_cx, own_cy=own_cy,
        wg_rows=orows.astype(np.int32), wg_cols=ocols.astype(np.int32),
        wg_cx=wcx[:ne], wg_cy=wcy[:ne],
        gh_rows=grows, gh_cols=gcols, gh_cx=wcx[ne:], gh_cy=wcy[ne:],
        ghost_point=ghost_point,
        crows=crows, cverts=cverts, dxv=dxv, dyv=dyv,
        vrows=vrows.astype(np.int32), vcells=vcells.astype(np.int32),
        n_vertices=len(mesh.nodes),
        h=np.sqrt(mesh.area),
        lsq_singular=sing,
    )


def get_stencils(mesh: Mesh) -> Stencils:
    st = getattr(mesh, "_stencils", None)
    if st is None:
        st = build_stencils(mesh)
        mesh._stencils = st
    return st
