"""shocklab: a 2D unstructured finite-volume Euler solver built to reproduce
and quantify numerical shock instability (carbuncle) across Riemann solvers,
grid topologies, control-volume placements and slope limiters."""

from ._kernels import backend_name
from .euler import Conserved, GasModel, Primitive
from .fluxes import FluxScheme, base_flux, hybrid_flux
from .mesh import Mesh, build_median_dual, generate_grid, read_mesh, validate_topology, write_mesh
from .recon import LimiterKind
from .riemann import exact_riemann_star, godunov_flux
from .solver import CaseConfig, run_steady, sod_verification

__version__ = "0.1.0"

__all__ = [
    "CaseConfig",
    "Conserved",
    "FluxScheme",
    "GasModel",
    "LimiterKind",
    "Mesh",
    "Primitive",
    "backend_name",
    "base_flux",
    "build_median_dual",
    "exact_riemann_star",
    "generate_grid",
    "godunov_flux",
    "hybrid_flux",
    "read_mesh",
    "run_steady",
    "sod_verification",
    "validate_topology",
    "write_mesh",
]
