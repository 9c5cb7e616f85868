"""Pure-numpy kernel backend.

Reference implementation of the hot loops; the compiled backend in _core.pyx
mirrors these formulas expression for expression so the two lanes agree to
floating-point roundoff. All state arrays are (n, 4) float64 with primitive
columns (rho, u, v, p).
"""

import numpy as np

from .codes import (
    HYBRID_BASE,
    SCHEME_AUSM_PLUS,
    SCHEME_ROE,
    SCHEME_SLAU,
    SCHEME_TV,
    SCHEME_VAN_LEER,
)

BACKEND = "python"

_AUSM_BETA = 0.125     # 1/8, Mach polynomial
_AUSM_ALPHA = 0.1875   # 3/16, pressure polynomial


def flux_batch(scheme, WL, WR, nx, ny, gamma, omega=None,
               entropy_delta=0.0, tv_isentropic=False, out=None):
    """Numerical flux per face for one of the scheme codes.

    Hybrid schemes blend only the momentum components of the base scheme
    toward the van Leer flux with per-face weight omega in (0, 1].
    """
    base = HYBRID_BASE.get(scheme)
    if base is not None:
        if omega is None:
            raise ValueError("hybrid scheme needs a per-face omega array")
        F = flux_batch(base, WL, WR, nx, ny, gamma,
                       tv_isentropic=tv_isentropic, out=out)
        FV = flux_batch(SCHEME_VAN_LEER, WL, WR, nx, ny, gamma)
        # blend the face-normal momentum component only: blending the
        # tangential component injects shear momentum with no paired energy
        # dissipation and pumps kinetic energy until pressure collapses
        w = np.asarray(omega)
        dfn = (1.0 - w) * ((FV[:, 1] - F[:, 1]) * nx
                           + (FV[:, 2] - F[:, 2]) * ny)
        F[:, 1] += dfn * nx
        F[:, 2] += dfn * ny
        return F

    g = gamma
    rL, uL, vL, pL = WL[:, 0], WL[:, 1], WL[:, 2], WL[:, 3]
    rR, uR, vR, pR = WR[:, 0], WR[:, 1], WR[:, 2], WR[:, 3]
    qnL = uL * nx + vL * ny
    qnR = uR * nx + vR * ny
    aL = np.sqrt(g * pL / rL)
    aR = np.sqrt(g * pR / rR)
    HL = aL * aL / (g - 1.0) + 0.5 * (uL * uL + vL * vL)
    HR = aR * aR / (g - 1.0) + 0.5 * (uR * uR + vR * vR)

    if out is None:
        out = np.empty_like(WL)

    if scheme == SCHEME_ROE:
        fL0 = rL * qnL
        fL1 = rL * qnL * uL + pL * nx
        fL2 = rL * qnL * vL + pL * ny
        fL3 = rL * qnL * HL
        fR0 = rR * qnR
        fR1 = rR * qnR * uR + pR * nx
        fR2 = rR * qnR * vR + pR * ny
        fR3 = rR * qnR * HR

        RT = np.sqrt(rR / rL)
        rho = RT * rL
        u = (uL + RT * uR) / (1.0 + RT)
        v = (vL + RT * vR) / (1.0 + RT)
        H = (HL + RT * HR) / (1.0 + RT)
        a2 = (g - 1.0) * (H - 0.5 * (u * u + v * v))
        a = np.sqrt(a2)
        qn = u * nx + v * ny

        drho = rR - rL
        dp = pR - pL
        dqn = qnR - qnL
        du = uR - uL
        dv = vR - vL

        s1 = np.abs(qn - a)
        s2 = np.abs(qn)
        s3 = np.abs(qn + a)
        if entropy_delta > 0.0:  # Harten fix, nonlinear (acoustic) waves only
            d = entropy_delta * a
            s1 = np.where(s1 < d, 0.5 * (s1 * s1 / d + d), s1)
            s3 = np.where(s3 < d, 0.5 * (s3 * s3 / d + d), s3)

        w1 = (dp - rho * a * dqn) / (2.0 * a2)
        w2 = drho - dp / a2
        w3 = (dp + rho * a * dqn) / (2.0 * a2)
        w4 = rho

        t1 = s1 * w1
        t2 = s2 * w2
        t3 = s3 * w3
        t4 = s2 * w4
        out[:, 0] = 0.5 * (fL0 + fR0 - (t1 + t2 + t3))
        out[:, 1] = 0.5 * (fL1 + fR1 - (t1 * (u - a * nx) + t2 * u
                                        + t3 * (u + a * nx)
                                        + t4 * (du - dqn * nx)))
        out[:, 2] = 0.5 * (fL2 + fR2 - (t1 * (v - a * ny) + t2 * v
                                        + t3 * (v + a * ny)
                                        + t4 * (dv - dqn * ny)))
        out[:, 3] = 0.5 * (fL3 + fR3 - (t1 * (H - a * qn)
                                        + t2 * 0.5 * (u * u + v * v)
                                        + t3 * (H + a * qn)
                                        + t4 * (u * du + v * dv - qn * dqn)))
        return out

    if scheme == SCHEME_VAN_LEER:
        qtL = vL * nx - uL * ny
        qtR = vR * nx - uR * ny
        ML = qnL / aL
        MR = qnR / aR
        gg = g * g

        # forward split of the left state (face frame)
        fmL = 0.25 * rL * aL * (ML + 1.0) ** 2
        faL = ((g - 1.0) * qnL + 2.0 * aL) / g
        feL = gg * faL * faL / (2.0 * (gg - 1.0)) + 0.5 * qtL * qtL
        sup = ML >= 1.0
        sub = ML > -1.0
        fp0 = np.where(sup, rL * qnL, np.where(sub, fmL, 0.0))
        fp1 = np.where(sup, rL * qnL * qnL + pL, np.where(sub, fmL * faL, 0.0))
        fp2 = np.where(sup, rL * qnL * qtL, np.where(sub, fmL * qtL, 0.0))
        fp3 = np.where(sup, rL * qnL * HL, np.where(sub, fmL * feL, 0.0))

        # backward split of the right state
        fmR = -0.25 * rR * aR * (MR - 1.0) ** 2
        faR = ((g - 1.0) * qnR - 2.0 * aR) / g
        feR = gg * faR * faR / (2.0 * (gg - 1.0)) + 0.5 * qtR * qtR
        sup = MR <= -1.0
        sub = MR < 1.0
        fm0 = np.where(sup, rR * qnR, np.where(sub, fmR, 0.0))
        fm1 = np.where(sup, rR * qnR * qnR + pR, np.where(sub, fmR * faR, 0.0))
        fm2 = np.where(sup, rR * qnR * qtR, np.where(sub, fmR * qtR, 0.0))
        fm3 = np.where(sup, rR * qnR * HR, np.where(sub, fmR * feR, 0.0))

        fn = fp1 + fm1
        ft = fp2 + fm2
        out[:, 0] = fp0 + fm0
        out[:, 1] = fn * nx - ft * ny
        out[:, 2] = fn * ny + ft * nx
        out[:, 3] = fp3 + fm3
        return out

    if scheme == SCHEME_AUSM_PLUS:
        # common interface sound speed from the critical speed per side
        csL2 = 2.0 * (g - 1.0) / (g + 1.0) * HL
        csR2 = 2.0 * (g - 1.0) / (g + 1.0) * HR
        csL = np.sqrt(csL2)
        csR = np.sqrt(csR2)
        chL = csL2 / np.maximum(csL, np.abs(qnL))
        chR = csR2 / np.maximum(csR, np.abs(qnR))
        ch = np.minimum(chL, chR)
        ML = qnL / ch
        MR = qnR / ch

        mp = np.where(np.abs(ML) >= 1.0, 0.5 * (ML + np.abs(ML)),
                      0.25 * (ML + 1.0) ** 2
                      + _AUSM_BETA * (ML * ML - 1.0) ** 2)
        mm = np.where(np.abs(MR) >= 1.0, 0.5 * (MR - np.abs(MR)),
                      -0.25 * (MR - 1.0) ** 2
                      - _AUSM_BETA * (MR * MR - 1.0) ** 2)
        pp = np.where(np.abs(ML) >= 1.0, np.where(ML > 0.0, 1.0, 0.0),
                      0.25 * (ML + 1.0) ** 2 * (2.0 - ML)
                      + _AUSM_ALPHA * ML * (ML * ML - 1.0) ** 2)
        pm = np.where(np.abs(MR) >= 1.0, np.where(MR < 0.0, 1.0, 0.0),
                      0.25 * (MR - 1.0) ** 2 * (2.0 + MR)
                      - _AUSM_ALPHA * MR * (MR * MR - 1.0) ** 2)

        mh = mp + mm
        ph = pp * pL + pm * pR
        mdot = ch * mh * np.where(mh > 0.0, rL, rR)
        up = np.where(mh > 0.0, uL, uR)
        vp = np.where(mh > 0.0, vL, vR)
        Hp = np.where(mh > 0.0, HL, HR)
        out[:, 0] = mdot
        out[:, 1] = mdot * up + ph * nx
        out[:, 2] = mdot * vp + ph * ny
        out[:, 3] = mdot * Hp
        return out

    if scheme == SCHEME_SLAU:
        cbar = 0.5 * (aL + aR)
        ML = qnL / cbar
        MR = qnR / cbar
        vn_bar = (rL * np.abs(qnL) + rR * np.abs(qnR)) / (rL + rR)
        gf = -np.maximum(np.minimum(ML, 0.0), -1.0) \
            * np.minimum(np.maximum(MR, 0.0), 1.0)
        vn_p = (1.0 - gf) * vn_bar + gf * np.abs(qnL)
        vn_m = (1.0 - gf) * vn_bar + gf * np.abs(qnR)
        mhat = np.minimum(
            1.0,
            np.sqrt(0.5 * (uL * uL + vL * vL + uR * uR + vR * vR)) / cbar,
        )
        chi = (1.0 - mhat) ** 2
        mdot = 0.5 * (rL * (qnL + vn_p) + rR * (qnR - vn_m)
                      - chi / cbar * (pR - pL))

        bp = np.where(np.abs(ML) >= 1.0, np.where(ML > 0.0, 1.0, 0.0),
                      0.25 * (ML + 1.0) ** 2 * (2.0 - ML))
        bm = np.where(np.abs(MR) >= 1.0, np.where(MR < 0.0, 1.0, 0.0),
                      0.25 * (MR - 1.0) ** 2 * (2.0 + MR))
        ptilde = 0.5 * (pL + pR) + 0.5 * (bp - bm) * (pL - pR) \
            + (1.0 - chi) * (bp + bm - 1.0) * 0.5 * (pL + pR)

        mdp = 0.5 * (mdot + np.abs(mdot))
        mdm = 0.5 * (mdot - np.abs(mdot))
        out[:, 0] = mdp + mdm
        out[:, 1] = mdp * uL + mdm * uR + ptilde * nx
        out[:, 2] = mdp * vL + mdm * vR + ptilde * ny
        out[:, 3] = mdp * HL + mdm * HR
        return out

    if scheme == SCHEME_TV:
        # advection/pressure splitting; the pressure subsystem is solved with
        # a sampled linearized (or isentropic) acoustic Riemann solver
        CLa = rL * aL
        CRa = rR * aR
        if tv_isentropic:
            s = (2.0 * aL / g + 2.0 * aR / g + qnL - qnR) / (
                2.0 * aL / (g * np.sqrt(pL)) + 2.0 * aR / (g * np.sqrt(pR))
            )
            s = np.maximum(s, 1e-6 * np.sqrt(np.minimum(pL, pR)))
            ps = s * s
            us = qnL - 2.0 * aL / g * (s / np.sqrt(pL) - 1.0)
        else:
            den = CLa + CRa
            us = (CLa * qnL + CRa * qnR + pL - pR) / den
            ps = (CRa * pL + CLa * pR + CLa * CRa * (qnL - qnR)) / den
            ps = np.maximum(ps, 1e-12 * np.minimum(pL, pR))
        # sample the acoustic fan at the interface; if the wave estimates
        # cross (colliding supersonic streams) the star region covers it
        sl = qnL - aL
        sr = qnR + aR
        sup_l = (sl > 0.0) & (sr > 0.0)
        sup_r = (sr < 0.0) & (sl < 0.0)
        us = np.where(sup_l, qnL, np.where(sup_r, qnR, us))
        ps = np.where(sup_l, pL, np.where(sup_r, pR, ps))

        left_side = us > 0.0
        r_up = np.where(left_side, rL, rR)
        u_up = np.where(left_side, uL, uR)
        v_up = np.where(left_side, vL, vR)
        k_up = 0.5 * r_up * (u_up * u_up + v_up * v_up)
        out[:, 0] = us * r_up
        out[:, 1] = us * r_up * u_up + ps * nx
        out[:, 2] = us * r_up * v_up + ps * ny
        out[:, 3] = us * k_up + g * ps * us / (g - 1.0)
        return out

    raise ValueError(f"unknown scheme code {scheme}")


def accumulate_residual(F, length, left, right, n_interior, area, out=None):
    """R_i = -(1/V_i) sum over faces of F.n * length, normals left->right."""
    n = len(area)
    if out is None:
        out = np.empty((n, 4))
    li = left
    ri = right[:n_interior]
    for k in range(4):
        c = F[:, k] * length
        acc = np.bincount(li, weights=c, minlength=n)
        acc -= np.bincount(ri, weights=c[:n_interior], minlength=n)
        out[:, k] = -acc / area
    return out


def lsq_gradients(fields, rptr, cols, cx, cy, rows,
                  gptr, gcols, gcx, gcy, grows, ghost, out=None):
    """Weighted least-squares gradients from precomputed coefficients.

    grad_i = sum_k c_k (u_k - u_i) over interior neighbors plus (optionally)
    reflected boundary ghosts; `rows` and `grows` are the per-entry cell ids
    matching the CSR structure.
    """
    n, m = fields.shape
    if out is None:
        out = np.empty((n, m, 2))
    for k in range(m):
        du = fields[cols, k] - fields[rows, k]
        gx = np.bincount(rows, weights=cx * du, minlength=n)
        gy = np.bincount(rows, weights=cy * du, minlength=n)
        if ghost is not None and len(grows):
            dg = ghost[gcols, k] - fields[grows, k]
            gx += np.bincount(grows, weights=gcx * dg, minlength=n)
            gy += np.bincount(grows, weights=gcy * dg, minlength=n)
        out[:, k, 0] = gx
        out[:, k, 1] = gy
    return out


def _entry_values(fields, ghost, rows, src, k):
    """Other-side value of each (cell, face) entry. Without ghost values the
    boundary entries are neutralized to the cell's own value (no constraint)."""
    vals = np.empty(len(src))
    own = src >= 0
    vals[own] = fields[src[own], k]
    if ghost is not None:
        vals[~own] = ghost[-src[~own] - 1, k]
    else:
        vals[~own] = fields[rows[~own], k]
    return vals


def neighbor_extremes(fields, ghost, rows, src, n):
    """Per-cell min/max over the cell itself and its face neighbors."""
    m = fields.shape[1]
    umin = fields.copy()
    umax = fields.copy()
    for k in range(m):
        vals = _entry_values(fields, ghost, rows, src, k)
        np.minimum.at(umin[:, k], rows, vals)
        np.maximum.at(umax[:, k], rows, vals)
    return umin, umax


def barth_phi(fields, grads, ghost, rows, src, dxf, dyf, out=None):
    """Barth-Jespersen clamp: face-point reconstruction stays within the
    face-neighbor averages."""
    n, m = fields.shape
    umin, umax = neighbor_extremes(fields, ghost, rows, src, n)
    active = (src >= 0) if ghost is None else np.ones(len(src), dtype=bool)
    if out is None:
        out = np.ones((n, m))
    else:
        out[:] = 1.0
    for k in range(m):
        d = grads[rows, k, 0] * dxf + grads[rows, k, 1] * dyf
        dd = np.where(d == 0.0, 1.0, d)
        up = umax[rows, k] - fields[rows, k]
        dn = umin[rows, k] - fields[rows, k]
        r = np.where(d > 0.0, up / dd, np.where(d < 0.0, dn / dd, 1.0))
        phi = np.where(active, np.minimum(1.0, r), 1.0)
        np.minimum.at(out[:, k], rows, phi)
    return out


def _venkat_ratio(dplus, dminus, eps2):
    num = (dplus * dplus + eps2) + 2.0 * dminus * dplus
    den = dplus * dplus + 2.0 * dminus * dminus + dminus * dplus + eps2
    den = np.where(den == 0.0, 1.0, den)
    return np.minimum(1.0, np.maximum(0.0, num / den))


def venkat_phi(fields, grads, ghost, rows, src, dxf, dyf, eps2, out=None):
    """Venkatakrishnan smooth limiter with eps^2 = (K h)^3 per cell."""
    n, m = fields.shape
    umin, umax = neighbor_extremes(fields, ghost, rows, src, n)
    active = (src >= 0) if ghost is None else np.ones(len(src), dtype=bool)
    if out is None:
        out = np.ones((n, m))
    else:
        out[:] = 1.0
    e2 = eps2[rows]
    for k in range(m):
        d = grads[rows, k, 0] * dxf + grads[rows, k, 1] * dyf
        up = umax[rows, k] - fields[rows, k]
        dn = umin[rows, k] - fields[rows, k]
        dplus = np.where(d > 0.0, up, dn)
        phi = np.where((d == 0.0) | ~active, 1.0, _venkat_ratio(dplus, d, e2))
        np.minimum.at(out[:, k], rows, phi)
    return out


def strict_phi(fields, grads, ghost, rows, src, dxf, dyf, out=None):
    """Interface-interval condition: the reconstructed face value must lie
    between the two adjacent cell-center values."""
    n, m = fields.shape
    active = (src >= 0) if ghost is None else np.ones(len(src), dtype=bool)
    if out is None:
        out = np.ones((n, m))
    else:
        out[:] = 1.0
    for k in range(m):
        vals = _entry_values(fields, ghost, rows, src, k)
        d = grads[rows, k, 0] * dxf + grads[rows, k, 1] * dyf
        dd = np.where(d == 0.0, 1.0, d)
        jump = vals - fields[rows, k]
        allowed = np.where(d > 0.0, np.maximum(jump, 0.0),
                           np.minimum(jump, 0.0))
        r = np.where((d == 0.0) | ~active, 1.0, allowed / dd)
        phi = np.minimum(1.0, r)
        np.minimum.at(out[:, k], rows, phi)
    return out


def vertex_extremes(fields, vrows, vcells, n_vertices):
    """Min/max of cell averages over every cell sharing each vertex."""
    m = fields.shape[1]
    vmin = np.full((n_vertices, m), np.inf)
    vmax = np.full((n_vertices, m), -np.inf)
    for k in range(m):
        np.minimum.at(vmin[:, k], vrows, fields[vcells, k])
        np.maximum.at(vmax[:, k], vrows, fields[vcells, k])
    return vmin, vmax


def mlp_phi(fields, grads, crows, cverts, dxv, dyv, vmin, vmax, eps2,
            out=None):
    """Vertex-based limiting: reconstructed corner values stay within the
    extremes of all cell averages sharing the corner (smooth variant)."""
    n, m = fields.shape
    if out is None:
        out = np.ones((n, m))
    else:
        out[:] = 1.0
    e2 = eps2[crows]
    for k in range(m):
        d = grads[crows, k, 0] * dxv + grads[crows, k, 1] * dyv
        up = vmax[cverts, k] - fields[crows, k]
        dn = vmin[cverts, k] - fields[crows, k]
        dplus = np.where(d > 0.0, up, dn)
        phi = np.where(d == 0.0, 1.0, _venkat_ratio(dplus, d, e2))
        np.minimum.at(out[:, k], crows, phi)
    return out


def face_states(fields, grads, phi, left, right, n_interior,
                dxl, dyl, dxr, dyr, WLf=None, WRf=None):
    """Extrapolate cell data to face midpoints; faces whose reconstruction
    loses positivity fall back to first order. Returns the fallback count."""
    nf = len(left)
    if WLf is None:
        WLf = np.empty((nf, 4))
    if WRf is None:
        WRf = np.empty((nf, 4))
    ri = right[:n_interior]
    for k in range(4):
        WLf[:, k] = fields[left, k] + phi[left, k] * (
            grads[left, k, 0] * dxl + grads[left, k, 1] * dyl)
        WRf[:n_interior, k] = fields[ri, k] + phi[ri, k] * (
            grads[ri, k, 0] * dxr[:n_interior]
            + grads[ri, k, 1] * dyr[:n_interior])
        WRf[n_interior:, k] = WLf[n_interior:, k]
    bad = (WLf[:, 0] <= 0.0) | (WLf[:, 3] <= 0.0) \
        | (WRf[:, 0] <= 0.0) | (WRf[:, 3] <= 0.0)
    nb = int(np.count_nonzero(bad))
    if nb:
        idx = np.flatnonzero(bad)
        WLf[idx] = fields[left[idx]]
        ii = idx[idx < n_interior]
        WRf[ii] = fields[right[ii]]
        bi = idx[idx >= n_interior]
        WRf[bi] = WLf[bi]
    return WLf, WRf, nb


def wavespeed_sums(W, ghost, left, right, n_interior, nx, ny, length, gamma,
                   out=None):
    """Sum over each volume's faces of (|qn| + c) * length, with the face
    state taken as the average of the two adjacent states."""
    n = len(W)
    ri = right[:n_interior]
    Wf = 0.5 * (W[left] + np.concatenate([W[ri], ghost], axis=0))
    qn = np.abs(Wf[:, 1] * nx + Wf[:, 2] * ny)
    c = np.sqrt(gamma * Wf[:, 3] / Wf[:, 0])
    s = (qn + c) * length
    acc = np.bincount(left, weights=s, minlength=n)
    acc += np.bincount(ri, weights=s[:n_interior], minlength=n)
    if out is None:
        return acc
    out[:] = acc
    return out


def face_min_to_cells(values, left, right, n_interior, n, out=None):
    """Per-cell minimum of a per-face quantity (shock-indicator stencils)."""
    if out is None:
        out = np.ones(n)
    else:
        out[:] = 1.0
    np.minimum.at(out, left, values)
    np.minimum.at(out, right[:n_interior], values[:n_interior])
    return out
