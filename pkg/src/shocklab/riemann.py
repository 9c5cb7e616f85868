"""Exact 1D Riemann solver, used as a verification oracle for the flux schemes.

Follows the classical two-wave formulation (see Toro, "Riemann Solvers and
Numerical Methods for Fluid Dynamics", ch. 4): the star pressure solves

    f(p) = f_L(p) + f_R(p) + (uR - uL) = 0

with f_K the shock (Rankine-Hugoniot) or rarefaction (isentropic) branch
depending on p vs p_K. Newton iteration with a bounded-bisection fallback.
"""

from dataclasses import dataclass

import numpy as np

from .errors import VacuumError
from .euler import GasModel

_REL_TOL = 1e-12
_MAX_NEWTON = 60


@dataclass(frozen=True)
class RiemannStar:
    """Star-region state of the two-wave solution."""

    p_star: float
    u_star: float
    left_wave: str  # "shock" | "rarefaction"
    right_wave: str


def _side_function(p, rho_k, p_k, a_k, gamma):
    """Pressure function f_K(p) and its derivative for one side."""
    p = np.asarray(p, dtype=np.float64)
    g = gamma
    A = 2.0 / ((g + 1.0) * rho_k)
    B = (g - 1.0) / (g + 1.0) * p_k
    shock = p > p_k
    sq = np.sqrt(A / (p + B))
    f_shock = (p - p_k) * sq
    df_shock = sq * (1.0 - 0.5 * (p - p_k) / (p + B))
    pr = np.maximum(p, 0.0) / p_k
    ex = (g - 1.0) / (2.0 * g)
    f_rare = 2.0 * a_k / (g - 1.0) * (pr**ex - 1.0)
    df_rare = pr ** (-(g + 1.0) / (2.0 * g)) / (rho_k * a_k)
    return np.where(shock, f_shock, f_rare), np.where(shock, df_shock, df_rare)


def _star_pressure_arrays(rhoL, uL, pL, rhoR, uR, pR, gamma):
    """Vectorized star pressure/velocity; raises VacuumError if any state pair
    opens a vacuum."""
    rhoL, uL, pL, rhoR, uR, pR = (
        np.asarray(x, dtype=np.float64) for x in (rhoL, uL, pL, rhoR, uR, pR)
    )
    g = gamma
    aL = np.sqrt(g * pL / rhoL)
    aR = np.sqrt(g * pR / rhoR)
    du = uR - uL
    if np.any(2.0 * aL / (g - 1.0) + 2.0 * aR / (g - 1.0) <= du):
        raise VacuumError("states generate vacuum; no positive star pressure")

    # Primitive-variable (linearized) guess, floored away from zero.
    rho_bar = 0.5 * (rhoL + rhoR)
    a_bar = 0.5 * (aL + aR)
    p0 = 0.5 * (pL + pR) - 0.5 * du * rho_bar * a_bar
    p0 = np.maximum(p0, 1e-8 * np.minimum(pL, pR))

    p = p0.copy()
    for _ in range(_MAX_NEWTON):
        fL, dL = _side_function(p, rhoL, pL, aL, g)
        fR, dR = _side_function(p, rhoR, pR, aR, g)
        f = fL + fR + du
        step = f / (dL + dR)
        p_new = p - step
        # keep the iterate positive; halve into the valid range if needed
        p_new = np.where(p_new <= 0.0, 0.5 * p, p_new)
        done = np.abs(p_new - p) <= _REL_TOL * p_new
        p = p_new
        if np.all(done):
            break
    fL, _ = _side_function(p, rhoL, pL, aL, g)
    fR, _ = _side_function(p, rhoR, pR, aR, g)
    u = 0.5 * (uL + uR) + 0.5 * (fR - fL)
    return p, u


def _star_pressure_bisection(rhoL, uL, pL, rhoR, uR, pR, gamma, tol=1e-12):
    """Scalar bisection solve, kept independent of the Newton path so the two
    can be cross-checked in tests."""
    g = gamma
    aL = np.sqrt(g * pL / rhoL)
    aR = np.sqrt(g * pR / rhoR)
    du = uR - uL
    if 2.0 * aL / (g - 1.0) + 2.0 * aR / (g - 1.0) <= du:
        raise VacuumError("states generate vacuum; no positive star pressure")

    def f(p):
        fL, _ = _side_function(p, rhoL, pL, aL, g)
        fR, _ = _side_function(p, rhoR, pR, aR, g)
        return float(fL + fR + du)

    lo = 1e-14 * min(pL, pR)
    hi = max(pL, pR)
    while f(hi) < 0.0:
        hi *= 4.0
        if hi > 1e20 * max(pL, pR):
            raise VacuumError("bisection bracket blew up")
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= tol * hi:
            break
    return 0.5 * (lo + hi)


def exact_riemann_star(left, right, gas: GasModel) -> RiemannStar:
    """Star state for 1D states (rho, u, p) given as Primitive-like triples.

    `left`/`right` may be Primitive (v ignored) or (rho, u, p) tuples.
    """
    rhoL, uL, pL = left[0], left[1], left[-1]
    rhoR, uR, pR = right[0], right[1], right[-1]
    p, u = _star_pressure_arrays(rhoL, uL, pL, rhoR, uR, pR, gas.gamma)
    p_star = float(p)
    u_star = float(u)
    return RiemannStar(
        p_star=p_star,
        u_star=u_star,
        left_wave="shock" if p_star > pL else "rarefaction",
        right_wave="shock" if p_star > pR else "rarefaction",
    )


def sample(star: RiemannStar, left, right, xi, gas: GasModel):
    """Solution (rho, u, p) at similarity coordinate xi = x/t.

    Standard wave-pattern sampling; xi = 0 gives the interface state used by
    the Godunov flux.
    """
    g = gas.gamma
    rhoL, uL, pL = left[0], left[1], left[-1]
    rhoR, uR, pR = right[0], right[1], right[-1]
    aL = np.sqrt(g * pL / rhoL)
    aR = np.sqrt(g * pR / rhoR)
    ps, us = star.p_star, star.u_star

    if xi <= us:  # left of the contact
        if ps > pL:  # left shock
            ratio = ps / pL
            gm = (g - 1.0) / (g + 1.0)
            s = uL - aL * np.sqrt((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g))
            if xi <= s:
                return rhoL, uL, pL
            rho = rhoL * (ratio + gm) / (gm * ratio + 1.0)
            return rho, us, ps
        head = uL - aL
        a_star = aL * (ps / pL) ** ((g - 1.0) / (2.0 * g))
        tail = us - a_star
        if xi <= head:
            return rhoL, uL, pL
        if xi >= tail:
            rho = rhoL * (ps / pL) ** (1.0 / g)
            return rho, us, ps
        # inside the left fan
        u = 2.0 / (g + 1.0) * (aL + 0.5 * (g - 1.0) * uL + xi)
        a = 2.0 / (g + 1.0) * (aL + 0.5 * (g - 1.0) * (uL - xi))
        rho = rhoL * (a / aL) ** (2.0 / (g - 1.0))
        p = pL * (a / aL) ** (2.0 * g / (g - 1.0))
        return rho, u, p

    if ps > pR:  # right shock
        ratio = ps / pR
        gm = (g - 1.0) / (g + 1.0)
        s = uR + aR * np.sqrt((g + 1.0) / (2.0 * g) * ratio + (g - 1.0) / (2.0 * g))
        if xi >= s:
            return rhoR, uR, pR
        rho = rhoR * (ratio + gm) / (gm * ratio + 1.0)
        return rho, us, ps
    head = uR + aR
    a_star = aR * (ps / pR) ** ((g - 1.0) / (2.0 * g))
    tail = us + a_star
    if xi >= head:
        return rhoR, uR, pR
    if xi <= tail:
        rho = rhoR * (ps / pR) ** (1.0 / g)
        return rho, us, ps
    u = 2.0 / (g + 1.0) * (-aR + 0.5 * (g - 1.0) * uR + xi)
    a = 2.0 / (g + 1.0) * (aR - 0.5 * (g - 1.0) * (uR - xi))
    rho = rhoR * (a / aR) ** (2.0 / (g - 1.0))
    p = pR * (a / aR) ** (2.0 * g / (g - 1.0))
    return rho, u, p


def godunov_flux(left, right, gas: GasModel) -> np.ndarray:
    """Exact-solution 1D flux: physical flux of the fan sampled at x/t = 0.

    Returns (rho*u, rho*u^2 + p, (E+p)*u); used only for 1D verification.
    """
    star = exact_riemann_star(left, right, gas)
    rho, u, p = sample(star, left, right, 0.0, gas)
    e = p / (gas.gamma - 1.0) + 0.5 * rho * u * u
    return np.array([rho * u, rho * u * u + p, (e + p) * u])


def sample_profile(left, right, x, t, x0, gas: GasModel):
    """Exact profile (rho, u, p) arrays at time t > 0 over positions x."""
    star = exact_riemann_star(left, right, gas)
    out = np.empty((len(x), 3))
    for i, xi in enumerate((np.asarray(x) - x0) / t):
        out[i] = sample(star, left, right, float(xi), gas)
    return out
