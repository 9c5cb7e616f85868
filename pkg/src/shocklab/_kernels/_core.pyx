# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel backend.

Transliteration of the numpy reference in pyk.py, expression for expression,
so both lanes produce identical results to floating-point roundoff. The
per-face flux loop and the limiter scatter loops dominate solver runtime.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, sqrt

from .codes import HYBRID_BASE

BACKEND = "cython"

cdef int ROE = 0
cdef int VAN_LEER = 1
cdef int AUSM_PLUS = 2
cdef int SLAU = 3
cdef int TV = 4
cdef int SLAU_HYBRID = 5
cdef int TV_HYBRID = 6

cdef double AUSM_BETA = 0.125
cdef double AUSM_ALPHA = 0.1875


cdef inline double _dmin(double a, double b) nogil:
    return a if a < b else b


cdef inline double _dmax(double a, double b) nogil:
    return a if a > b else b


cdef void _flux_one(int scheme, double rL, double uL, double vL, double pL,
                    double rR, double uR, double vR, double pR,
                    double nx, double ny, double g, double entropy_delta,
                    bint tv_isentropic, double* out) nogil:
    cdef double qnL = uL * nx + vL * ny
    cdef double qnR = uR * nx + vR * ny
    cdef double aL = sqrt(g * pL / rL)
    cdef double aR = sqrt(g * pR / rR)
    cdef double HL = aL * aL / (g - 1.0) + 0.5 * (uL * uL + vL * vL)
    cdef double HR = aR * aR / (g - 1.0) + 0.5 * (uR * uR + vR * vR)

    cdef double fL0, fL1, fL2, fL3, fR0, fR1, fR2, fR3
    cdef double RT, rho, u, v, H, a2, a, qn
    cdef double drho, dp, dqn, du, dv
    cdef double s1, s2, s3, d, w1, w2, w3, w4, t1, t2, t3, t4
    cdef double qtL, qtR, ML, MR, gg
    cdef double fmL, faL, feL, fmR, faR, feR
    cdef double fp0, fp1, fp2, fp3, fm0, fm1, fm2, fm3, fn, ft
    cdef double csL2, csR2, csL, csR, chL, chR, ch
    cdef double mp, mm, pp, pm, mh, ph, mdot, up, vp, Hp
    cdef double cbar, vn_bar, gf, vn_p, vn_m, mhat, chi
    cdef double bp, bm, ptilde, mdp, mdm
    cdef double CLa, CRa, s, ps, us, den, sl, sr
    cdef double r_up, u_up, v_up, k_up

    if scheme == ROE:
        fL0 = rL * qnL
        fL1 = rL * qnL * uL + pL * nx
        fL2 = rL * qnL * vL + pL * ny
        fL3 = rL * qnL * HL
        fR0 = rR * qnR
        fR1 = rR * qnR * uR + pR * nx
        fR2 = rR * qnR * vR + pR * ny
        fR3 = rR * qnR * HR

        RT = sqrt(rR / rL)
        rho = RT * rL
        u = (uL + RT * uR) / (1.0 + RT)
        v = (vL + RT * vR) / (1.0 + RT)
        H = (HL + RT * HR) / (1.0 + RT)
        a2 = (g - 1.0) * (H - 0.5 * (u * u + v * v))
        a = sqrt(a2)
        qn = u * nx + v * ny

        drho = rR - rL
        dp = pR - pL
        dqn = qnR - qnL
        du = uR - uL
        dv = vR - vL

        s1 = fabs(qn - a)
        s2 = fabs(qn)
        s3 = fabs(qn + a)
        if entropy_delta > 0.0:
            d = entropy_delta * a
            if s1 < d:
                s1 = 0.5 * (s1 * s1 / d + d)
            if s3 < d:
                s3 = 0.5 * (s3 * s3 / d + d)

        w1 = (dp - rho * a * dqn) / (2.0 * a2)
        w2 = drho - dp / a2
        w3 = (dp + rho * a * dqn) / (2.0 * a2)
        w4 = rho

        t1 = s1 * w1
        t2 = s2 * w2
        t3 = s3 * w3
        t4 = s2 * w4
        out[0] = 0.5 * (fL0 + fR0 - (t1 + t2 + t3))
        out[1] = 0.5 * (fL1 + fR1 - (t1 * (u - a * nx) + t2 * u
                                     + t3 * (u + a * nx)
                                     + t4 * (du - dqn * nx)))
        out[2] = 0.5 * (fL2 + fR2 - (t1 * (v - a * ny) + t2 * v
                                     + t3 * (v + a * ny)
                                     + t4 * (dv - dqn * ny)))
        out[3] = 0.5 * (fL3 + fR3 - (t1 * (H - a * qn)
                                     + t2 * 0.5 * (u * u + v * v)
                                     + t3 * (H + a * qn)
                                     + t4 * (u * du + v * dv - qn * dqn)))
        return

    if scheme == VAN_LEER:
        qtL = vL * nx - uL * ny
        qtR = vR * nx - uR * ny
        ML = qnL / aL
        MR = qnR / aR
        gg = g * g

        if ML >= 1.0:
            fp0 = rL * qnL
            fp1 = rL * qnL * qnL + pL
            fp2 = rL * qnL * qtL
            fp3 = rL * qnL * HL
        elif ML > -1.0:
            fmL = 0.25 * rL * aL * (ML + 1.0) * (ML + 1.0)
            faL = ((g - 1.0) * qnL + 2.0 * aL) / g
            feL = gg * faL * faL / (2.0 * (gg - 1.0)) + 0.5 * qtL * qtL
            fp0 = fmL
            fp1 = fmL * faL
            fp2 = fmL * qtL
            fp3 = fmL * feL
        else:
            fp0 = fp1 = fp2 = fp3 = 0.0

        if MR <= -1.0:
            fm0 = rR * qnR
            fm1 = rR * qnR * qnR + pR
            fm2 = rR * qnR * qtR
            fm3 = rR * qnR * HR
        elif MR < 1.0:
            fmR = -0.25 * rR * aR * (MR - 1.0) * (MR - 1.0)
            faR = ((g - 1.0) * qnR - 2.0 * aR) / g
            feR = gg * faR * faR / (2.0 * (gg - 1.0)) + 0.5 * qtR * qtR
            fm0 = fmR
            fm1 = fmR * faR
            fm2 = fmR * qtR
            fm3 = fmR * feR
        else:
            fm0 = fm1 = fm2 = fm3 = 0.0

        fn = fp1 + fm1
        ft = fp2 + fm2
        out[0] = fp0 + fm0
        out[1] = fn * nx - ft * ny
        out[2] = fn * ny + ft * nx
        out[3] = fp3 + fm3
        return

    if scheme == AUSM_PLUS:
        csL2 = 2.0 * (g - 1.0) / (g + 1.0) * HL
        csR2 = 2.0 * (g - 1.0) / (g + 1.0) * HR
        csL = sqrt(csL2)
        csR = sqrt(csR2)
        chL = csL2 / _dmax(csL, fabs(qnL))
        chR = csR2 / _dmax(csR, fabs(qnR))
        ch = _dmin(chL, chR)
        ML = qnL / ch
        MR = qnR / ch

        if fabs(ML) >= 1.0:
            mp = 0.5 * (ML + fabs(ML))
            pp = 1.0 if ML > 0.0 else 0.0
        else:
            mp = 0.25 * (ML + 1.0) * (ML + 1.0) \
                + AUSM_BETA * (ML * ML - 1.0) * (ML * ML - 1.0)
            pp = 0.25 * (ML + 1.0) * (ML + 1.0) * (2.0 - ML) \
                + AUSM_ALPHA * ML * (ML * ML - 1.0) * (ML * ML - 1.0)
        if fabs(MR) >= 1.0:
            mm = 0.5 * (MR - fabs(MR))
            pm = 1.0 if MR < 0.0 else 0.0
        else:
            mm = -0.25 * (MR - 1.0) * (MR - 1.0) \
                - AUSM_BETA * (MR * MR - 1.0) * (MR * MR - 1.0)
            pm = 0.25 * (MR - 1.0) * (MR - 1.0) * (2.0 + MR) \
                - AUSM_ALPHA * MR * (MR * MR - 1.0) * (MR * MR - 1.0)

        mh = mp + mm
        ph = pp * pL + pm * pR
        if mh > 0.0:
            mdot = ch * mh * rL
            up = uL
            vp = vL
            Hp = HL
        else:
            mdot = ch * mh * rR
            up = uR
            vp = vR
            Hp = HR
        out[0] = mdot
        out[1] = mdot * up + ph * nx
        out[2] = mdot * vp + ph * ny
        out[3] = mdot * Hp
        return

    if scheme == SLAU:
        cbar = 0.5 * (aL + aR)
        ML = qnL / cbar
        MR = qnR / cbar
        vn_bar = (rL * fabs(qnL) + rR * fabs(qnR)) / (rL + rR)
        gf = -_dmax(_dmin(ML, 0.0), -1.0) * _dmin(_dmax(MR, 0.0), 1.0)
        vn_p = (1.0 - gf) * vn_bar + gf * fabs(qnL)
        vn_m = (1.0 - gf) * vn_bar + gf * fabs(qnR)
        mhat = _dmin(1.0, sqrt(0.5 * (uL * uL + vL * vL
                                      + uR * uR + vR * vR)) / cbar)
        chi = (1.0 - mhat) * (1.0 - mhat)
        mdot = 0.5 * (rL * (qnL + vn_p) + rR * (qnR - vn_m)
                      - chi / cbar * (pR - pL))

        if fabs(ML) >= 1.0:
            bp = 1.0 if ML > 0.0 else 0.0
        else:
            bp = 0.25 * (ML + 1.0) * (ML + 1.0) * (2.0 - ML)
        if fabs(MR) >= 1.0:
            bm = 1.0 if MR < 0.0 else 0.0
        else:
            bm = 0.25 * (MR - 1.0) * (MR - 1.0) * (2.0 + MR)
        ptilde = 0.5 * (pL + pR) + 0.5 * (bp - bm) * (pL - pR) \
            + (1.0 - chi) * (bp + bm - 1.0) * 0.5 * (pL + pR)

        mdp = 0.5 * (mdot + fabs(mdot))
        mdm = 0.5 * (mdot - fabs(mdot))
        out[0] = mdp + mdm
        out[1] = mdp * uL + mdm * uR + ptilde * nx
        out[2] = mdp * vL + mdm * vR + ptilde * ny
        out[3] = mdp * HL + mdm * HR
        return

    if scheme == TV:
        CLa = rL * aL
        CRa = rR * aR
        if tv_isentropic:
            s = (2.0 * aL / g + 2.0 * aR / g + qnL - qnR) / (
                2.0 * aL / (g * sqrt(pL)) + 2.0 * aR / (g * sqrt(pR)))
            s = _dmax(s, 1e-6 * sqrt(_dmin(pL, pR)))
            ps = s * s
            us = qnL - 2.0 * aL / g * (s / sqrt(pL) - 1.0)
        else:
            den = CLa + CRa
            us = (CLa * qnL + CRa * qnR + pL - pR) / den
            ps = (CRa * pL + CLa * pR + CLa * CRa * (qnL - qnR)) / den
            ps = _dmax(ps, 1e-12 * _dmin(pL, pR))
        sl = qnL - aL
        sr = qnR + aR
        if sl > 0.0 and sr > 0.0:
            us = qnL
            ps = pL
        elif sr < 0.0 and sl < 0.0:
            us = qnR
            ps = pR

        if us > 0.0:
            r_up = rL
            u_up = uL
            v_up = vL
        else:
            r_up = rR
            u_up = uR
            v_up = vR
        k_up = 0.5 * r_up * (u_up * u_up + v_up * v_up)
        out[0] = us * r_up
        out[1] = us * r_up * u_up + ps * nx
        out[2] = us * r_up * v_up + ps * ny
        out[3] = us * k_up + g * ps * us / (g - 1.0)
        return


def flux_batch(int scheme, double[:, ::1] WL, double[:, ::1] WR,
               double[::1] nx, double[::1] ny, double gamma, omega=None,
               double entropy_delta=0.0, bint tv_isentropic=False, out=None):
    cdef Py_ssize_t n = WL.shape[0]
    if out is None:
        out = np.empty((n, 4))
    cdef double[:, ::1] F = out
    cdef double[::1] om
    cdef double buf[4]
    cdef double vl[4]
    cdef int base
    cdef bint hybrid = scheme in HYBRID_BASE
    cdef Py_ssize_t i
    cdef double w, dfn

    if hybrid:
        if omega is None:
            raise ValueError("hybrid scheme needs a per-face omega array")
        om = omega
        base = SLAU if scheme == SLAU_HYBRID else TV
        with nogil:
            for i in range(n):
                _flux_one(base, WL[i, 0], WL[i, 1], WL[i, 2], WL[i, 3],
                          WR[i, 0], WR[i, 1], WR[i, 2], WR[i, 3],
                          nx[i], ny[i], gamma, 0.0, tv_isentropic, buf)
                _flux_one(VAN_LEER, WL[i, 0], WL[i, 1], WL[i, 2], WL[i, 3],
                          WR[i, 0], WR[i, 1], WR[i, 2], WR[i, 3],
                          nx[i], ny[i], gamma, 0.0, 0, vl)
                w = om[i]
                dfn = (1.0 - w) * ((vl[1] - buf[1]) * nx[i]
                                   + (vl[2] - buf[2]) * ny[i])
                F[i, 0] = buf[0]
                F[i, 1] = buf[1] + dfn * nx[i]
                F[i, 2] = buf[2] + dfn * ny[i]
                F[i, 3] = buf[3]
        return out

    with nogil:
        for i in range(n):
            _flux_one(scheme, WL[i, 0], WL[i, 1], WL[i, 2], WL[i, 3],
                      WR[i, 0], WR[i, 1], WR[i, 2], WR[i, 3],
                      nx[i], ny[i], gamma, entropy_delta, tv_isentropic, buf)
            F[i, 0] = buf[0]
            F[i, 1] = buf[1]
            F[i, 2] = buf[2]
            F[i, 3] = buf[3]
    return out


def accumulate_residual(double[:, ::1] F, double[::1] length,
                        int[::1] left, int[::1] right, Py_ssize_t n_interior,
                        double[::1] area, out=None):
    cdef Py_ssize_t n = area.shape[0]
    cdef Py_ssize_t nf = F.shape[0]
    if out is None:
        out = np.empty((n, 4))
    cdef double[:, ::1] R = out
    cdef Py_ssize_t i, f, k
    cdef double c
    with nogil:
        for i in range(n):
            R[i, 0] = 0.0
            R[i, 1] = 0.0
            R[i, 2] = 0.0
            R[i, 3] = 0.0
        for f in range(nf):
            for k in range(4):
                c = F[f, k] * length[f]
                R[left[f], k] += c
                if f < n_interior:
                    R[right[f], k] -= c
        for i in range(n):
            for k in range(4):
                R[i, k] = -R[i, k] / area[i]
    return out


def lsq_gradients(double[:, ::1] fields, rptr, int[::1] cols,
                  double[::1] cx, double[::1] cy, int[::1] rows,
                  gptr, int[::1] gcols, double[::1] gcx, double[::1] gcy,
                  int[::1] grows, ghost, out=None):
    cdef Py_ssize_t n = fields.shape[0]
    cdef Py_ssize_t m = fields.shape[1]
    if out is None:
        out = np.zeros((n, m, 2))
    else:
        out[:] = 0.0
    cdef double[:, :, ::1] G = out
    cdef double[:, ::1] gh
    cdef Py_ssize_t e, k, r
    cdef double du
    cdef bint has_ghost = ghost is not None
    if has_ghost:
        gh = ghost
    with nogil:
        for e in range(rows.shape[0]):
            r = rows[e]
            for k in range(m):
                du = fields[cols[e], k] - fields[r, k]
                G[r, k, 0] += cx[e] * du
                G[r, k, 1] += cy[e] * du
        if has_ghost:
            for e in range(grows.shape[0]):
                r = grows[e]
                for k in range(m):
                    du = gh[gcols[e], k] - fields[r, k]
                    G[r, k, 0] += gcx[e] * du
                    G[r, k, 1] += gcy[e] * du
    return out


cdef inline double _entry_value(double[:, ::1] fields, double[:, ::1] gh,
                                bint has_ghost, int row, int s,
                                Py_ssize_t k) nogil:
    if s >= 0:
        return fields[s, k]
    if has_ghost:
        return gh[-s - 1, k]
    return fields[row, k]


def barth_phi(double[:, ::1] fields, double[:, :, ::1] grads, ghost,
              int[::1] rows, int[::1] src, double[::1] dxf, double[::1] dyf,
              out=None):
    cdef Py_ssize_t n = fields.shape[0]
    cdef Py_ssize_t m = fields.shape[1]
    if out is None:
        out = np.ones((n, m))
    else:
        out[:] = 1.0
    cdef double[:, ::1] phi = out
    cdef double[:, ::1] gh = fields  # placeholder, replaced if ghost given
    cdef bint has_ghost = ghost is not None
    if has_ghost:
        gh = ghost
    cdef Py_ssize_t ne = rows.shape[0]
    umin = fields.copy()
    umax = fields.copy()
    cdef double[:, ::1] umn = umin
    cdef double[:, ::1] umx = umax
    cdef Py_ssize_t e, k
    cdef int r, s
    cdef double val, dd, d, up, dn, rr, p
    with nogil:
        for e in range(ne):
            r = rows[e]
            s = src[e]
            for k in range(m):
                val = _entry_value(fields, gh, has_ghost, r, s, k)
                if val < umn[r, k]:
                    umn[r, k] = val
                if val > umx[r, k]:
                    umx[r, k] = val
        for e in range(ne):
            r = rows[e]
            s = src[e]
            for k in range(m):
                d = grads[r, k, 0] * dxf[e] + grads[r, k, 1] * dyf[e]
                if d == 0.0 or (s < 0 and not has_ghost):
                    continue
                dd = d
                if d > 0.0:
                    rr = (umx[r, k] - fields[r, k]) / dd
                else:
                    rr = (umn[r, k] - fields[r, k]) / dd
                p = _dmin(1.0, rr)
                if p < phi[r, k]:
                    phi[r, k] = p
    return out


cdef inline double _venkat_ratio(double dplus, double dminus,
                                 double eps2) nogil:
    cdef double num = (dplus * dplus + eps2) + 2.0 * dminus * dplus
    cdef double den = dplus * dplus + 2.0 * dminus * dminus \
        + dminus * dplus + eps2
    if den == 0.0:
        return 1.0
    return _dmin(1.0, _dmax(0.0, num / den))


def venkat_phi(double[:, ::1] fields, double[:, :, ::1] grads, ghost,
               int[::1] rows, int[::1] src, double[::1] dxf, double[::1] dyf,
               double[::1] eps2, out=None):
    cdef Py_ssize_t n = fields.shape[0]
    cdef Py_ssize_t m = fields.shape[1]
    if out is None:
        out = np.ones((n, m))
    else:
        out[:] = 1.0
    cdef double[:, ::1] phi = out
    cdef double[:, ::1] gh = fields
    cdef bint has_ghost = ghost is not None
    if has_ghost:
        gh = ghost
    cdef Py_ssize_t ne = rows.shape[0]
    umin = fields.copy()
    umax = fields.copy()
    cdef double[:, ::1] umn = umin
    cdef double[:, ::1] umx = umax
    cdef Py_ssize_t e, k
    cdef int r, s
    cdef double val, d, dplus, p
    with nogil:
        for e in range(ne):
            r = rows[e]
            s = src[e]
            for k in range(m):
                val = _entry_value(fields, gh, has_ghost, r, s, k)
                if val < umn[r, k]:
                    umn[r, k] = val
                if val > umx[r, k]:
                    umx[r, k] = val
        for e in range(ne):
            r = rows[e]
            s = src[e]
            for k in range(m):
                d = grads[r, k, 0] * dxf[e] + grads[r, k, 1] * dyf[e]
                if d == 0.0 or (s < 0 and not has_ghost):
                    continue
                if d > 0.0:
                    dplus = umx[r, k] - fields[r, k]
                else:
                    dplus = umn[r, k] - fields[r, k]
                p = _venkat_ratio(dplus, d, eps2[r])
                if p < phi[r, k]:
                    phi[r, k] = p
    return out


def strict_phi(double[:, ::1] fields, double[:, :, ::1] grads, ghost,
               int[::1] rows, int[::1] src, double[::1] dxf, double[::1] dyf,
               out=None):
    cdef Py_ssize_t n = fields.shape[0]
    cdef Py_ssize_t m = fields.shape[1]
    if out is None:
        out = np.ones((n, m))
    else:
        out[:] = 1.0
    cdef double[:, ::1] phi = out
    cdef double[:, ::1] gh = fields
    cdef bint has_ghost = ghost is not None
    if has_ghost:
        gh = ghost
    cdef Py_ssize_t ne = rows.shape[0]
    cdef Py_ssize_t e, k
    cdef int r, s
    cdef double val, d, jump, allowed, p
    with nogil:
        for e in range(ne):
            r = rows[e]
            s = src[e]
            for k in range(m):
                d = grads[r, k, 0] * dxf[e] + grads[r, k, 1] * dyf[e]
                if d == 0.0 or (s < 0 and not has_ghost):
                    continue
                val = _entry_value(fields, gh, has_ghost, r, s, k)
                jump = val - fields[r, k]
                if d > 0.0:
                    allowed = _dmax(jump, 0.0)
                else:
                    allowed = _dmin(jump, 0.0)
                p = _dmin(1.0, allowed / d)
                if p < phi[r, k]:
                    phi[r, k] = p
    return out


def vertex_extremes(double[:, ::1] fields, int[::1] vrows, int[::1] vcells,
                    Py_ssize_t n_vertices):
    cdef Py_ssize_t m = fields.shape[1]
    vmin = np.full((n_vertices, m), np.inf)
    vmax = np.full((n_vertices, m), -np.inf)
    cdef double[:, ::1] mn = vmin
    cdef double[:, ::1] mx = vmax
    cdef Py_ssize_t e, k
    cdef int v, c
    with nogil:
        for e in range(vrows.shape[0]):
            v = vrows[e]
            c = vcells[e]
            for k in range(m):
                if fields[c, k] < mn[v, k]:
                    mn[v, k] = fields[c, k]
                if fields[c, k] > mx[v, k]:
                    mx[v, k] = fields[c, k]
    return vmin, vmax


def mlp_phi(double[:, ::1] fields, double[:, :, ::1] grads, int[::1] crows,
            int[::1] cverts, double[::1] dxv, double[::1] dyv,
            double[:, ::1] vmin, double[:, ::1] vmax, double[::1] eps2,
            out=None):
    cdef Py_ssize_t n = fields.shape[0]
    cdef Py_ssize_t m = fields.shape[1]
    if out is None:
        out = np.ones((n, m))
    else:
        out[:] = 1.0
    cdef double[:, ::1] phi = out
    cdef Py_ssize_t e, k
    cdef int r, v
    cdef double d, dplus, p
    with nogil:
        for e in range(crows.shape[0]):
            r = crows[e]
            v = cverts[e]
            for k in range(m):
                d = grads[r, k, 0] * dxv[e] + grads[r, k, 1] * dyv[e]
                if d == 0.0:
                    continue
                if d > 0.0:
                    dplus = vmax[v, k] - fields[r, k]
                else:
                    dplus = vmin[v, k] - fields[r, k]
                p = _venkat_ratio(dplus, d, eps2[r])
                if p < phi[r, k]:
                    phi[r, k] = p
    return out


def face_states(double[:, ::1] fields, double[:, :, ::1] grads,
                double[:, ::1] phi, int[::1] left, int[::1] right,
                Py_ssize_t n_interior, double[::1] dxl, double[::1] dyl,
                double[::1] dxr, double[::1] dyr, WLf=None, WRf=None):
    cdef Py_ssize_t nf = left.shape[0]
    if WLf is None:
        WLf = np.empty((nf, 4))
    if WRf is None:
        WRf = np.empty((nf, 4))
    cdef double[:, ::1] WL = WLf
    cdef double[:, ::1] WR = WRf
    cdef Py_ssize_t f, k
    cdef int l, r
    cdef int nb = 0
    cdef bint bad
    with nogil:
        for f in range(nf):
            l = left[f]
            for k in range(4):
                WL[f, k] = fields[l, k] + phi[l, k] * (
                    grads[l, k, 0] * dxl[f] + grads[l, k, 1] * dyl[f])
            if f < n_interior:
                r = right[f]
                for k in range(4):
                    WR[f, k] = fields[r, k] + phi[r, k] * (
                        grads[r, k, 0] * dxr[f] + grads[r, k, 1] * dyr[f])
            else:
                for k in range(4):
                    WR[f, k] = WL[f, k]
            bad = (WL[f, 0] <= 0.0 or WL[f, 3] <= 0.0
                   or WR[f, 0] <= 0.0 or WR[f, 3] <= 0.0)
            if bad:
                nb += 1
                for k in range(4):
                    WL[f, k] = fields[l, k]
                if f < n_interior:
                    for k in range(4):
                        WR[f, k] = fields[right[f], k]
                else:
                    for k in range(4):
                        WR[f, k] = WL[f, k]
    return WLf, WRf, nb


def wavespeed_sums(double[:, ::1] W, double[:, ::1] ghost, int[::1] left,
                   int[::1] right, Py_ssize_t n_interior, double[::1] nx,
                   double[::1] ny, double[::1] length, double gamma,
                   out=None):
    cdef Py_ssize_t n = W.shape[0]
    cdef Py_ssize_t nf = left.shape[0]
    if out is None:
        out = np.zeros(n)
    else:
        out[:] = 0.0
    cdef double[::1] acc = out
    cdef Py_ssize_t f
    cdef int l, r
    cdef double rho, u, v, p, qn, c, s
    with nogil:
        for f in range(nf):
            l = left[f]
            if f < n_interior:
                r = right[f]
                rho = 0.5 * (W[l, 0] + W[r, 0])
                u = 0.5 * (W[l, 1] + W[r, 1])
                v = 0.5 * (W[l, 2] + W[r, 2])
                p = 0.5 * (W[l, 3] + W[r, 3])
            else:
                rho = 0.5 * (W[l, 0] + ghost[f - n_interior, 0])
                u = 0.5 * (W[l, 1] + ghost[f - n_interior, 1])
                v = 0.5 * (W[l, 2] + ghost[f - n_interior, 2])
                p = 0.5 * (W[l, 3] + ghost[f - n_interior, 3])
            qn = fabs(u * nx[f] + v * ny[f])
            c = sqrt(gamma * p / rho)
            s = (qn + c) * length[f]
            acc[l] += s
            if f < n_interior:
                acc[right[f]] += s
    return out


def face_min_to_cells(double[::1] values, int[::1] left, int[::1] right,
                      Py_ssize_t n_interior, Py_ssize_t n, out=None):
    if out is None:
        out = np.ones(n)
    else:
        out[:] = 1.0
    cdef double[::1] acc = out
    cdef Py_ssize_t f
    with nogil:
        for f in range(left.shape[0]):
            if values[f] < acc[left[f]]:
                acc[left[f]] = values[f]
            if f < n_interior and values[f] < acc[right[f]]:
                acc[right[f]] = values[f]
    return out
