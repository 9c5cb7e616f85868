"""Steady-state explicit finite-volume driver.

One residual pipeline serves both control-volume placements (the median-dual
mesh is just another Mesh) and both spatial orders. Pseudo-time marching is
two-stage SSP Runge-Kutta with per-volume local time steps and an automatic
CFL backoff when a stage loses positivity.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels, indicator, recon, riemann
from ._kernels.codes import HYBRID_BASE
from .errors import ConfigError, DivergenceError, PositivityError
from .euler import GasModel, conserved_array, freestream, primitive_array, states_positive
from .fluxes import FluxScheme
from .mesh import (TAG_INFLOW, TAG_OUTFLOW, TAG_SYMMETRY, TAG_WALL, Mesh,
                   build_median_dual, generate_grid, read_mesh)
from .recon import LimiterKind
from .stencils import get_stencils


@dataclass
class CaseConfig:
    """Complete description of one run."""

    mach: float
    scheme: FluxScheme
    gamma: float = 1.4
    discretization: str = "cell"        # cell | vertex
    grid_kind: str = "quad"             # quad | regular_tri | irregular_tri | file
    n_radial: int = 80
    n_circumferential: int = 120
    r_cylinder: float = 1.0
    r_outer: float = 4.0
    seed: int = 0
    mesh_path: str = ""
    order: int = 1
    limiter: LimiterKind = LimiterKind.NONE
    limiter_k: float = 1.0
    entropy_fix: str = "none"
    entropy_delta: float = 0.1
    tv_pressure: str = "linearized"
    cfl: float = 0.5
    max_iters: int = 50000
    residual_tol: float = 1e-8
    deterministic: bool = True
    out_dir: str = "out"
    write_vtk: bool = True
    write_history: bool = True
    write_report: bool = True

    def __post_init__(self):
        if self.cfl <= 0.0:
            raise ConfigError("cfl must be positive")
        if self.max_iters < 1:
            raise ConfigError("max_iters must be >= 1")
        if self.order not in (1, 2):
            raise ConfigError("order must be 1 or 2")
        if self.discretization not in ("cell", "vertex"):
            raise ConfigError(f"unknown discretization {self.discretization!r}")
        if self.limiter_k <= 0.0:
            raise ConfigError("limiter K must be positive")

    @property
    def gas(self) -> GasModel:
        return GasModel(self.gamma)


@dataclass
class SolutionField:
    U: np.ndarray
    gas: GasModel
    iterations: int = 0
    residual: float = 1.0
    limiter_fallbacks: int = 0
    cfl_reductions: int = 0

    def primitives(self) -> np.ndarray:
        return primitive_array(self.U, self.gas.gamma)


@dataclass
class ResidualHistory:
    iterations: list = field(default_factory=list)
    residuals: list = field(default_factory=list)  # relative to iteration 1

    def append(self, it, res):
        self.iterations.append(int(it))
        self.residuals.append(float(res))

    @property
    def drop_orders(self) -> float:
        if not self.residuals or self.residuals[-1] <= 0.0:
            return float("inf")
        return -float(np.log10(self.residuals[-1]))


def make_mesh(config: CaseConfig) -> Mesh:
    if config.grid_kind == "file":
        if not config.mesh_path:
            raise ConfigError("grid kind 'file' needs a mesh path")
        m = read_mesh(config.mesh_path)
    else:
        m = generate_grid(config.grid_kind, config.n_radial,
                          config.n_circumferential, config.r_cylinder,
                          config.r_outer, seed=config.seed)
    if config.discretization == "vertex":
        m = build_median_dual(m)
    return m


def apply_boundary(mesh: Mesh, W_face, config_or_freestream, gamma=None):
    """Ghost primitive states per boundary face from interior-side face
    states: inflow is a freestream Dirichlet ghost, outflow extrapolates,
    slip walls and symmetry mirror the normal velocity."""
    if isinstance(config_or_freestream, CaseConfig):
        winf = freestream(config_or_freestream.mach, config_or_freestream.gas)
    else:
        winf = config_or_freestream
    ni = mesh.n_interior
    tags = mesh.face_tag[ni:]
    nx = mesh.face_normal[ni:, 0]
    ny = mesh.face_normal[ni:, 1]
    G = np.array(W_face, dtype=np.float64, copy=True)
    wall = (tags == TAG_WALL) | (tags == TAG_SYMMETRY)
    qn = G[:, 1] * nx + G[:, 2] * ny
    G[wall, 1] -= 2.0 * qn[wall] * nx[wall]
    G[wall, 2] -= 2.0 * qn[wall] * ny[wall]
    inflow = tags == TAG_INFLOW
    G[inflow] = (winf.rho, winf.u, winf.v, winf.p)
    unknown = ~(wall | inflow | (tags == TAG_OUTFLOW))
    if np.any(unknown):
        raise ConfigError("boundary face with unknown tag")
    return G


class ResidualEvaluator:
    """Owns the per-mesh buffers and evaluates R(U) = -(1/V) sum F.n l."""

    def __init__(self, mesh: Mesh, config: CaseConfig, backend=None):
        self.mesh = mesh
        self.config = config
        self.kern = backend if backend is not None else _kernels.active
        self.gas = config.gas
        self.winf = freestream(config.mach, self.gas)
        self.st = get_stencils(mesh)
        n, nf, ni = mesh.n_volumes, mesh.n_faces, mesh.n_interior
        self.n, self.nf, self.ni = n, nf, ni
        self.nx = np.ascontiguousarray(mesh.face_normal[:, 0])
        self.ny = np.ascontiguousarray(mesh.face_normal[:, 1])
        self.cen = mesh.centroid
        self.dxl = mesh.face_mid[:, 0] - self.cen[mesh.face_left, 0]
        self.dyl = mesh.face_mid[:, 1] - self.cen[mesh.face_left, 1]
        ri = np.where(mesh.face_right >= 0, mesh.face_right, 0)
        self.dxr = mesh.face_mid[:, 0] - self.cen[ri, 0]
        self.dyr = mesh.face_mid[:, 1] - self.cen[ri, 1]
        self.W = np.empty((n, 4))
        self.WL = np.empty((nf, 4))
        self.WR = np.empty((nf, 4))
        self.F = np.empty((nf, 4))
        self.R = np.empty((n, 4))
        self.grads = np.empty((n, 4, 2))
        self.limiter_fallbacks = 0
        self.scheme_code = config.scheme.code
        self.is_hybrid = self.scheme_code in HYBRID_BASE
        self.entropy_delta = (config.entropy_delta
                              if config.entropy_fix == "harten"
                              and config.scheme is FluxScheme.ROE else 0.0)
        self.tv_isentropic = config.tv_pressure == "isentropic"
        self.godunov = False

    def ghosts(self, W_face):
        return apply_boundary(self.mesh, W_face, self.winf)

    def face_omega(self, p, ghost_p):
        f = indicator.face_ratios(self.mesh, p, ghost_p)
        cmin = self.kern.face_min_to_cells(f, self.mesh.face_left,
                                           self.mesh.face_right, self.ni,
                                           self.n)
        omega = cmin[self.mesh.face_left].copy()
        omega[:self.ni] = np.minimum(omega[:self.ni],
                                     cmin[self.mesh.face_right[:self.ni]])
        return omega

    def _face_states(self, U):
        """Fill self.WL/self.WR for all faces; returns cell primitives."""
        mesh, ni, cfg = self.mesh, self.ni, self.config
        W = primitive_array(U, self.gas.gamma, out=self.W)
        if cfg.order == 1:
            self.WL[:] = W[mesh.face_left]
            self.WR[:ni] = W[mesh.face_right[:ni]]
            self.WR[ni:] = self.ghosts(self.WL[ni:])
            return W
        Gcell = self.ghosts(W[mesh.face_left[ni:]])
        st = self.st
        self.kern.lsq_gradients(W, None, st.wg_cols, st.wg_cx, st.wg_cy,
                                st.wg_rows, None, st.gh_cols, st.gh_cx,
                                st.gh_cy, st.gh_rows, Gcell, out=self.grads)
        phi = recon.compute_phi(cfg.limiter, mesh, W, self.grads,
                                ghost=Gcell, k=cfg.limiter_k,
                                pressures=W[:, 3], ghost_p=Gcell[:, 3],
                                backend=self.kern)
        _, _, nfb = self.kern.face_states(
            W, self.grads, phi, mesh.face_left, mesh.face_right, ni,
            self.dxl, self.dyl, self.dxr, self.dyr,
            WLf=self.WL, WRf=self.WR)
        self.limiter_fallbacks += nfb
        self.WR[ni:] = self.ghosts(self.WL[ni:])
        return W

    def residual(self, U, out=None):
        mesh = self.mesh
        W = self._face_states(U)
        if self.godunov:
            F = _godunov_face_flux(self.WL, self.WR, self.nx, self.ny,
                                   self.gas, out=self.F)
        else:
            omega = None
            if self.is_hybrid:
                gp = self.WR[self.ni:, 3] if self.config.order == 1 else None
                if gp is None:
                    gp = self.ghosts(W[mesh.face_left[self.ni:]])[:, 3]
                omega = self.face_omega(W[:, 3], gp)
            F = self.kern.flux_batch(self.scheme_code, self.WL, self.WR,
                                     self.nx, self.ny, self.gas.gamma,
                                     omega=omega,
                                     entropy_delta=self.entropy_delta,
                                     tv_isentropic=self.tv_isentropic,
                                     out=self.F)
        return self.kern.accumulate_residual(
            F, mesh.face_length, mesh.face_left, mesh.face_right, self.ni,
            mesh.area, out=self.R if out is None else out)

    def wavespeed_sums(self, W):
        ghost = self.ghosts(W[self.mesh.face_left[self.ni:]])
        return self.kern.wavespeed_sums(W, ghost, self.mesh.face_left,
                                        self.mesh.face_right, self.ni,
                                        self.nx, self.ny,
                                        self.mesh.face_length,
                                        self.gas.gamma)


def _godunov_face_flux(WL, WR, nx, ny, gas, out=None):
    """Exact-Riemann face flux in the rotated frame with passively advected
    tangential velocity; 1D verification only."""
    n = len(WL)
    if out is None:
        out = np.empty((n, 4))
    for i in range(n):
        rL, uL, vL, pL = WL[i]
        rR, uR, vR, pR = WR[i]
        qnL = uL * nx[i] + vL * ny[i]
        qtL = vL * nx[i] - uL * ny[i]
        qnR = uR * nx[i] + vR * ny[i]
        qtR = vR * nx[i] - uR * ny[i]
        star = riemann.exact_riemann_star((rL, qnL, pL), (rR, qnR, pR), gas)
        rho, qn, p = riemann.sample(star, (rL, qnL, pL), (rR, qnR, pR), 0.0,
                                    gas)
        qt = qtL if star.u_star > 0.0 else (qtR if star.u_star < 0.0
                                            else 0.5 * (qtL + qtR))
        e = p / (gas.gamma - 1.0) + 0.5 * rho * (qn * qn + qt * qt)
        fn = rho * qn * qn + p
        ft = rho * qn * qt
        out[i, 0] = rho * qn
        out[i, 1] = fn * nx[i] - ft * ny[i]
        out[i, 2] = fn * ny[i] + ft * nx[i]
        out[i, 3] = (e + p) * qn
    return out


def compute_residual(mesh: Mesh, U, config: CaseConfig, backend=None):
    """One-shot residual evaluation (tests and diagnostics)."""
    return ResidualEvaluator(mesh, config, backend).residual(U).copy()


def local_time_step(mesh: Mesh, U, cfl, config: CaseConfig, backend=None):
    """dt_i = cfl * V_i / sum over faces of (|qn| + c) * length."""
    ev = ResidualEvaluator(mesh, config, backend)
    W = primitive_array(np.asarray(U, dtype=np.float64), config.gamma)
    return cfl * mesh.area / ev.wavespeed_sums(W)


def rk2_step(U, dt, residual_fn):
    """Two-stage SSP-RK: U1 = U + dt R(U); U2 = (U + U1 + dt R(U1)) / 2."""
    R1 = residual_fn(U)
    U1 = U + dt[:, None] * R1
    R2 = residual_fn(U1)
    U2 = 0.5 * (U + U1 + dt[:, None] * R2)
    return U1, U2, R1


class _StageUnstable(Exception):
    pass


class SteadyDriver:
    """Pseudo-time marcher with local time steps and CFL backoff."""

    MAX_CFL_CUTS = 5
    RESTORE_AFTER = 100

    def __init__(self, mesh: Mesh, config: CaseConfig, backend=None):
        self.mesh = mesh
        self.config = config
        self.ev = ResidualEvaluator(mesh, config, backend)
        self.gas = config.gas
        winf = freestream(config.mach, self.gas)
        self.U = conserved_array(
            np.tile([winf.rho, winf.u, winf.v, winf.p], (mesh.n_volumes, 1)),
            self.gas.gamma)
        self.history = ResidualHistory()
        self.iteration = 0
        self.cfl_cuts = 0
        self.total_cuts = 0
        self._clean = 0
        self._norm0 = None

    def _advance_once(self, cfl):
        ev = self.ev
        W = primitive_array(self.U, self.gas.gamma)
        dt = cfl * self.mesh.area / ev.wavespeed_sums(W)
        R1 = ev.residual(self.U)
        U1 = self.U + dt[:, None] * R1
        if not states_positive(U1, self.gas.gamma):
            raise _StageUnstable
        R2 = ev.residual(U1)
        U2 = 0.5 * (self.U + U1 + dt[:, None] * R2)
        if not states_positive(U2, self.gas.gamma):
            raise _StageUnstable
        res = float(np.sqrt(np.mean(R1[:, 0] ** 2)))
        return U2, res

    def step(self):
        """One accepted iteration (internally retries at reduced CFL)."""
        self.iteration += 1
        while True:
            cfl = self.config.cfl * 0.5**self.cfl_cuts
            try:
                U2, res = self._advance_once(cfl)
            except (_StageUnstable, PositivityError):
                if self.cfl_cuts >= self.MAX_CFL_CUTS:
                    raise DivergenceError(
                        f"positivity lost at iteration {self.iteration} after "
                        f"{self.MAX_CFL_CUTS} CFL reductions",
                        iteration=self.iteration, history=self.history)
                self.cfl_cuts += 1
                self.total_cuts += 1
                self._clean = 0
                continue
            break
        self.U = U2
        self._clean += 1
        if self.cfl_cuts > 0 and self._clean >= self.RESTORE_AFTER:
            self.cfl_cuts -= 1
            self._clean = 0
        if self._norm0 is None:
            self._norm0 = res if res > 0.0 else 1.0
            rel = 1.0 if res > 0.0 else 0.0
        else:
            rel = res / self._norm0
        self.history.append(self.iteration, rel if self.iteration > 1 else 1.0)
        return rel

    def solution(self) -> SolutionField:
        return SolutionField(
            U=self.U, gas=self.gas, iterations=self.iteration,
            residual=self.history.residuals[-1] if self.history.residuals else 1.0,
            limiter_fallbacks=self.ev.limiter_fallbacks,
            cfl_reductions=self.total_cuts)


def run_steady(config: CaseConfig, mesh: Mesh = None, backend=None,
               progress=None):
    """March to steady state; returns (SolutionField, ResidualHistory,
    converged flag). Iteration-capped runs are a result, not an error."""
    if mesh is None:
        mesh = make_mesh(config)
    drv = SteadyDriver(mesh, config, backend)
    converged = False
    for _ in range(config.max_iters):
        rel = drv.step()
        if progress is not None and drv.iteration % 1000 == 0:
            progress(drv.iteration, rel)
        if rel < config.residual_tol:
            converged = True
            break
    return drv.solution(), drv.history, converged


# ---------------------------------------------------------------------------
# 1D verification harness
# ---------------------------------------------------------------------------

SOD_LEFT = (1.0, 0.0, 0.0, 1.0)
SOD_RIGHT = (0.125, 0.0, 0.0, 0.1)


def sod_strip_mesh(cells) -> Mesh:
    """1 x N quad strip on [0,1] with symmetry top/bottom, outflow ends."""
    from .mesh import TAG_OUTFLOW as OUT, TAG_SYMMETRY as SYM, build_from_polygons
    h = 1.0 / cells
    xs = np.linspace(0.0, 1.0, cells + 1)
    nodes = np.concatenate([
        np.column_stack([xs, np.zeros(cells + 1)]),
        np.column_stack([xs, np.full(cells + 1, h)]),
    ])
    top = cells + 1
    polys = [(i, i + 1, top + i + 1, top + i) for i in range(cells)]
    tags = {}
    for i in range(cells):
        tags[(i, i + 1)] = SYM
        tags[(top + i, top + i + 1)] = SYM
    tags[(0, top)] = OUT
    tags[(cells, top + cells)] = OUT
    return build_from_polygons(nodes, polys, tags,
                               meta={"kind": "strip", "cells": cells})


def sod_verification(cells, t_end, scheme, order=1,
                     limiter=LimiterKind.NONE, cfl=0.8, backend=None,
                     gamma=1.4):
    """Integrate the Sod problem with global time steps; returns the L1
    density error against the exact profile. `scheme` may be a FluxScheme or
    the string "godunov" for the exact-solver flux."""
    if cells < 10:
        raise ConfigError("sod verification needs at least 10 cells")
    mesh = sod_strip_mesh(cells)
    gas = GasModel(gamma)
    use_godunov = scheme == "godunov"
    config = CaseConfig(
        mach=1.0, scheme=FluxScheme.ROE if use_godunov else scheme,
        gamma=gamma, grid_kind="file", order=order, limiter=limiter, cfl=cfl,
        max_iters=1)
    ev = ResidualEvaluator(mesh, config, backend)
    ev.godunov = use_godunov

    W0 = np.where(mesh.centroid[:, [0]] < 0.5,
                  np.array(SOD_LEFT), np.array(SOD_RIGHT))
    U = conserved_array(W0, gamma)

    t = 0.0
    while t < t_end:
        W = primitive_array(U, gamma)
        dt = float(np.min(cfl * mesh.area / ev.wavespeed_sums(W)))
        dt = min(dt, t_end - t)
        dta = np.full(mesh.n_volumes, dt)
        _, U, _ = rk2_step(U, dta, ev.residual)
        if not states_positive(U, gamma):
            raise DivergenceError(f"1D run lost positivity at t={t:.4f}")
        t += dt

    rho = primitive_array(U, gamma)[:, 0]
    if t_end <= 0.0:
        exact = W0[:, 0]
    else:
        prof = riemann.sample_profile((1.0, 0.0, 1.0), (0.125, 0.0, 0.1),
                                      mesh.centroid[:, 0], t_end, 0.5, gas)
        exact = prof[:, 0]
    dx = mesh.area / (1.0 / cells)  # strip height h = 1/cells divides out
    return float(np.sum(np.abs(rho - exact) * dx))
