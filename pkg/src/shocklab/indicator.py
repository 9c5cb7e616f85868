"""Pressure-based shock indicator.

Each face carries f = min(p+/p-, p-/p+) in (0, 1]; the weight omega at a face
is the minimum of f over all faces of the two adjacent control volumes. In
smooth flow omega is ~1, across a shock it drops toward p_downstream/p_upstream.
"""

import numpy as np

from . import _kernels
from .errors import PositivityError
from .mesh import TAG_INFLOW, Mesh
from .stencils import get_stencils


def face_pressure_ratio(p_plus, p_minus) -> float:
    """Symmetric two-sided pressure ratio of one face, in (0, 1]."""
    if p_plus <= 0.0 or p_minus <= 0.0:
        raise PositivityError(
            f"pressure ratio needs positive pressures, got {p_plus}, {p_minus}")
    return min(p_plus / p_minus, p_minus / p_plus)


def boundary_ghost_pressure(mesh: Mesh, pressures, p_inflow=None):
    """Ghost pressures for the indicator stencil: slip walls, symmetry and
    outflow copy the interior value (f = 1 there); inflow uses the freestream
    pressure when given."""
    ni = mesh.n_interior
    pg = np.asarray(pressures)[mesh.face_left[ni:]].copy()
    if p_inflow is not None:
        pg[mesh.face_tag[ni:] == TAG_INFLOW] = p_inflow
    return pg


def face_ratios(mesh: Mesh, pressures, ghost_p=None, exponent=1.0):
    """Per-face f over all faces; boundary faces pair the interior pressure
    with the ghost pressure."""
    p = np.asarray(pressures, dtype=np.float64)
    if np.any(p <= 0.0):
        raise PositivityError("indicator needs positive pressures")
    ni = mesh.n_interior
    pl = p[mesh.face_left]
    pr = np.empty_like(pl)
    pr[:ni] = p[mesh.face_right[:ni]]
    pr[ni:] = pl[ni:] if ghost_p is None else ghost_p
    f = np.minimum(pl / pr, pr / pl)
    if exponent != 1.0:
        f = f**exponent
    return f


def face_weights(mesh: Mesh, pressures, ghost_p=None, exponent=1.0,
                 backend=None):
    """omega per face: stencil minimum of f over the faces of both adjacent
    volumes (the union minimum is the min of the two per-cell minima)."""
    kern = backend if backend is not None else _kernels.active
    f = face_ratios(mesh, pressures, ghost_p, exponent)
    ni = mesh.n_interior
    cell_min = kern.face_min_to_cells(f, mesh.face_left, mesh.face_right,
                                      ni, mesh.n_volumes)
    omega = cell_min[mesh.face_left].copy()
    omega[:ni] = np.minimum(omega[:ni], cell_min[mesh.face_right[:ni]])
    return omega


def stencil_weight(face, mesh: Mesh, pressures, p_inflow=None,
                   exponent=1.0) -> float:
    """omega for a single interior face (reference path for tests)."""
    if face >= mesh.n_interior:
        raise ValueError(f"face {face} is not interior")
    ghost = boundary_ghost_pressure(mesh, pressures, p_inflow)
    f = face_ratios(mesh, pressures, ghost, exponent)
    i = int(mesh.face_left[face])
    j = int(mesh.face_right[face])
    members = [
        k for k in range(mesh.n_faces)
        if mesh.face_left[k] in (i, j)
        or (k < mesh.n_interior and mesh.face_right[k] in (i, j))
    ]
    return float(np.min(f[members]))


def cell_weights(mesh: Mesh, pressures, ghost_p=None, backend=None):
    """Per-cell omega over the cell's own faces and its vertex neighborhood;
    drives the strict/weak blend of the pressure-weighted MLP limiter."""
    kern = backend if backend is not None else _kernels.active
    st = get_stencils(mesh)
    f = face_ratios(mesh, pressures, ghost_p)
    ni = mesh.n_interior
    omega = kern.face_min_to_cells(f, mesh.face_left, mesh.face_right,
                                   ni, mesh.n_volumes)
    p = np.asarray(pressures, dtype=np.float64)
    pcol = np.ascontiguousarray(p[:, None])
    vmin, vmax = kern.vertex_extremes(pcol, st.vrows, st.vcells, st.n_vertices)
    pmin = np.full(mesh.n_volumes, np.inf)
    pmax = np.full(mesh.n_volumes, -np.inf)
    np.minimum.at(pmin, st.crows, vmin[st.cverts, 0])
    np.maximum.at(pmax, st.crows, vmax[st.cverts, 0])
    np.minimum(omega, p / pmax, out=omega)
    np.minimum(omega, pmin / p, out=omega)
    return omega
