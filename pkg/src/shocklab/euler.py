"""Ideal-gas Euler state representations, conversions, flux and wave speeds.

Everything is nondimensional with the freestream sound speed as the velocity
scale and the freestream pressure as the pressure scale, so a freestream at
Mach number Ma is (rho, u, v, p) = (gamma, Ma, 0, 1).
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import PositivityError


@dataclass(frozen=True)
class GasModel:
    """Calorically perfect gas, gamma = cp/cv."""

    gamma: float = 1.4

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")


class Primitive(NamedTuple):
    rho: float
    u: float
    v: float
    p: float


class Conserved(NamedTuple):
    rho: float
    mom_x: float
    mom_y: float
    energy: float


def freestream(mach, gas: GasModel) -> Primitive:
    """Freestream state in unit-sound-speed normalization: |u| = Ma, c = 1."""
    return Primitive(rho=gas.gamma, u=float(mach), v=0.0, p=1.0)


def to_conserved(prim: Primitive, gas: GasModel) -> Conserved:
    rho, u, v, p = prim
    if rho <= 0.0:
        raise PositivityError(f"non-positive density {rho}")
    if p <= 0.0:
        raise PositivityError(f"non-positive pressure {p}")
    e = p / (gas.gamma - 1.0) + 0.5 * rho * (u * u + v * v)
    return Conserved(rho, rho * u, rho * v, e)


def to_primitive(cons: Conserved, gas: GasModel) -> Primitive:
    rho, mx, my, e = cons
    if rho <= 0.0:
        raise PositivityError(f"non-positive density {rho}")
    u = mx / rho
    v = my / rho
    p = (gas.gamma - 1.0) * (e - 0.5 * rho * (u * u + v * v))
    if p <= 0.0:
        raise PositivityError(f"non-positive pressure {p}")
    return Primitive(rho, u, v, p)


def sound_speed(prim: Primitive, gas: GasModel) -> float:
    return float(np.sqrt(gas.gamma * prim.p / prim.rho))


def physical_flux(prim: Primitive, normal, gas: GasModel) -> np.ndarray:
    """Projected Euler flux F.n per unit face length.

    Returns (rho*qn, rho*u*qn + p*nx, rho*v*qn + p*ny, (E+p)*qn).
    """
    rho, u, v, p = prim
    nx, ny = float(normal[0]), float(normal[1])
    qn = u * nx + v * ny
    e = p / (gas.gamma - 1.0) + 0.5 * rho * (u * u + v * v)
    return np.array(
        [rho * qn, rho * u * qn + p * nx, rho * v * qn + p * ny, (e + p) * qn]
    )


def max_wave_speed(prim: Primitive, normal, gas: GasModel) -> float:
    """|qn| + c, the fastest signal speed normal to the face."""
    nx, ny = float(normal[0]), float(normal[1])
    qn = prim.u * nx + prim.v * ny
    return abs(qn) + sound_speed(prim, gas)


# ---------------------------------------------------------------------------
# Field-level (array) forms. W has columns (rho, u, v, p); U has columns
# (rho, rho*u, rho*v, E). Both are (n, 4) float64.
# ---------------------------------------------------------------------------

def primitive_array(U, gamma, out=None, check=True):
    U = np.asarray(U, dtype=np.float64)
    if out is None:
        out = np.empty_like(U)
    rho = U[:, 0]
    out[:, 0] = rho
    out[:, 1] = U[:, 1] / rho
    out[:, 2] = U[:, 2] / rho
    out[:, 3] = (gamma - 1.0) * (
        U[:, 3] - 0.5 * rho * (out[:, 1] ** 2 + out[:, 2] ** 2)
    )
    if check:
        bad = np.flatnonzero((rho <= 0.0) | (out[:, 3] <= 0.0))
        if bad.size:
            i = int(bad[0])
            raise PositivityError(
                f"non-physical state rho={rho[i]:.6g} p={out[i, 3]:.6g}",
                volume_index=i,
            )
    return out


def conserved_array(W, gamma, out=None):
    W = np.asarray(W, dtype=np.float64)
    if out is None:
        out = np.empty_like(W)
    rho = W[:, 0]
    out[:, 0] = rho
    out[:, 1] = rho * W[:, 1]
    out[:, 2] = rho * W[:, 2]
    out[:, 3] = W[:, 3] / (gamma - 1.0) + 0.5 * rho * (W[:, 1] ** 2 + W[:, 2] ** 2)
    return out


def states_positive(U_or_W, gamma, conserved=True):
    """Fast positivity probe (no exception), used by the CFL controller."""
    A = U_or_W
    if not np.all(np.isfinite(A)):
        return False
    rho = A[:, 0]
    if conserved:
        ke = 0.5 * (A[:, 1] ** 2 + A[:, 2] ** 2)
        # p > 0  <=>  E*rho - ke > 0 for rho > 0 (scaled to avoid division)
        return bool(np.all(rho > 0.0) and np.all(A[:, 3] * rho - ke > 0.0))
    return bool(np.all(rho > 0.0) and np.all(A[:, 3] > 0.0))
