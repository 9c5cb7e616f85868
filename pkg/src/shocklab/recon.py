"""Second-order linear reconstruction: gradients, slope limiters, face states.

Reconstruction is in primitive variables with one limiter value per variable
per volume. Four limiters: Barth-Jespersen, Venkatakrishnan, vertex-based MLP
(smooth variant), and the pressure-weighted MLP that blends a strict
face-interval condition with the vertex condition using the shock indicator.
"""

import enum

import numpy as np

from . import _kernels, indicator
from .errors import ConfigError
from .mesh import Mesh
from .stencils import get_stencils


class LimiterKind(enum.Enum):
    NONE = "none"
    BARTH = "barth"
    VENKATAKRISHNAN = "venkatakrishnan"
    MLP = "mlp"
    MLP_PW = "mlp_pw"

    @classmethod
    def from_name(cls, name: str) -> "LimiterKind":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(k.value for k in cls)
            raise ConfigError(f"unknown limiter {name!r} (one of: {valid})")


def compute_gradients(mesh: Mesh, fields, ghost=None, backend=None):
    """Weighted least-squares gradients, exact for linear fields.

    `fields` is (n,) or (n, m); ghost values (per boundary face) switch the
    stencil to its ghost-augmented variant. Returns (n, 2) or (n, m, 2).
    """
    kern = backend if backend is not None else _kernels.active
    st = get_stencils(mesh)
    F = np.asarray(fields, dtype=np.float64)
    single = F.ndim == 1
    if single:
        F = np.ascontiguousarray(F[:, None])
    G = np.asarray(ghost, dtype=np.float64) if ghost is not None else None
    if G is not None and G.ndim == 1:
        G = np.ascontiguousarray(G[:, None])
    if G is None:
        out = kern.lsq_gradients(F, None, st.own_cols, st.own_cx, st.own_cy,
                                 st.own_rows, None, st.gh_cols,
                                 st.gh_cx, st.gh_cy, st.gh_rows, None)
    else:
        out = kern.lsq_gradients(F, None, st.wg_cols, st.wg_cx, st.wg_cy,
                                 st.wg_rows, None, st.gh_cols,
                                 st.gh_cx, st.gh_cy, st.gh_rows, G)
    return out[:, 0, :] if single else out


def barth_factor(d_plus, d_minus) -> float:
    """Clamp ratio of one face: allowed increment over proposed increment."""
    if d_minus == 0.0:
        return 1.0
    return min(1.0, d_plus / d_minus)


def venkatakrishnan_factor(d_plus, d_minus, eps2=0.0) -> float:
    """Smooth rational limiter value for one face."""
    if d_minus == 0.0:
        return 1.0
    num = (d_plus * d_plus + eps2) + 2.0 * d_minus * d_plus
    den = d_plus * d_plus + 2.0 * d_minus * d_minus + d_minus * d_plus + eps2
    if den == 0.0:
        return 1.0
    return min(1.0, max(0.0, num / den))


def _eps2(st, k):
    return (k * st.h) ** 3


def compute_phi(kind: LimiterKind, mesh: Mesh, fields, grads, ghost=None,
                k=1.0, pressures=None, ghost_p=None, backend=None):
    """Limiter field phi in [0, 1] per volume per variable."""
    kern = backend if backend is not None else _kernels.active
    st = get_stencils(mesh)
    F = np.asarray(fields, dtype=np.float64)
    if F.ndim == 1:
        F = np.ascontiguousarray(F[:, None])
    G = None
    if ghost is not None:
        G = np.asarray(ghost, dtype=np.float64)
        if G.ndim == 1:
            G = np.ascontiguousarray(G[:, None])

    if kind is LimiterKind.NONE:
        return np.ones_like(F)
    if kind is LimiterKind.BARTH:
        return kern.barth_phi(F, grads, G, st.rows, st.src, st.dxf, st.dyf)
    if kind is LimiterKind.VENKATAKRISHNAN:
        return kern.venkat_phi(F, grads, G, st.rows, st.src, st.dxf, st.dyf,
                               _eps2(st, k))
    if kind is LimiterKind.MLP:
        vmin, vmax = kern.vertex_extremes(F, st.vrows, st.vcells,
                                          st.n_vertices)
        return kern.mlp_phi(F, grads, st.crows, st.cverts, st.dxv, st.dyv,
                            vmin, vmax, _eps2(st, k))
    if kind is LimiterKind.MLP_PW:
        if pressures is None:
            pressures = F[:, 3] if F.shape[1] >= 4 else F[:, 0]
        return mlp_pw_limiter(mesh, F, grads, pressures, k, ghost=G,
                              ghost_p=ghost_p, backend=kern)
    raise ConfigError(f"unhandled limiter kind {kind}")


def mlp_pw_limiter(mesh: Mesh, fields, gradients, pressures, k=1.0,
                   ghost=None, ghost_p=None, backend=None):
    """Pressure-weighted MLP: phi = w*phi_strict + (1-w)*phi_weak with
    w = 1 - omega_cell. Smooth flow recovers the vertex-based MLP; across
    strong pressure jumps the strict face-interval condition takes over."""
    kern = backend if backend is not None else _kernels.active
    st = get_stencils(mesh)
    F = np.asarray(fields, dtype=np.float64)
    if F.ndim == 1:
        F = np.ascontiguousarray(F[:, None])
    vmin, vmax = kern.vertex_extremes(F, st.vrows, st.vcells, st.n_vertices)
    phi_weak = kern.mlp_phi(F, gradients, st.crows, st.cverts, st.dxv, st.dyv,
                            vmin, vmax, _eps2(st, k))
    phi_strict = kern.strict_phi(F, gradients, ghost, st.rows, st.src,
                                 st.dxf, st.dyf)
    omega = indicator.cell_weights(mesh, pressures, ghost_p, backend=kern)
    w = (1.0 - omega)[:, None]
    return w * phi_strict + (1.0 - w) * phi_weak


def reconstruct_face_states(mesh: Mesh, fields, gradients, phi, backend=None):
    """Left/right primitive states at every face midpoint.

    Boundary faces get the extrapolated interior state on both slots (the
    solver replaces the right slot with the boundary ghost). Returns
    (WL, WR, n_fallback) where n_fallback counts positivity-driven reversions
    to first order."""
    kern = backend if backend is not None else _kernels.active
    F = np.ascontiguousarray(fields, dtype=np.float64)
    ni = mesh.n_interior
    cen = mesh.centroid
    dxl = mesh.face_mid[:, 0] - cen[mesh.face_left, 0]
    dyl = mesh.face_mid[:, 1] - cen[mesh.face_left, 1]
    ri = mesh.face_right.copy()
    ri[ni:] = 0  # ignored; keeps the gather in-range
    dxr = mesh.face_mid[:, 0] - cen[ri, 0]
    dyr = mesh.face_mid[:, 1] - cen[ri, 1]
    return kern.face_states(F, gradients, phi, mesh.face_left,
                            mesh.face_right, ni, dxl, dyl, dxr, dyr)
