"""Quantitative diagnostics for shock-instability runs plus field export.

The instability measures are artifact-defined proxies for what is usually
judged by eye: a mirror-pair pressure asymmetry for symmetric grids and a
shock-front roughness from angle-binned radial pressure profiles. Stability
verdicts in reports are comparative (ratios against a stable baseline run),
not absolute thresholds.
"""

import json

import numpy as np

from .errors import ShockLabError
from .mesh import Mesh
from .solver import ResidualHistory, SolutionField


class PairingError(ShockLabError):
    """Mesh has no exact mirror pairing about y = 0."""


def mirror_pairs(mesh: Mesh, tol=1e-12):
    """Index pairs (i, j) with site_i = mirror(site_j) about y = 0;
    centerline volumes pair with themselves. Raises PairingError when the
    sites don't pair within tolerance."""
    sites = mesh.site
    scale = max(float(np.max(np.abs(sites))), 1.0)
    tol = tol * scale
    upper = np.flatnonzero(sites[:, 1] > tol)
    lower = np.flatnonzero(sites[:, 1] < -tol)
    center = np.flatnonzero(np.abs(sites[:, 1]) <= tol)
    if len(upper) != len(lower):
        raise PairingError(
            f"{len(upper)} upper vs {len(lower)} lower volumes")
    iu = upper[np.lexsort((sites[upper, 1], sites[upper, 0]))]
    il = lower[np.lexsort((-sites[lower, 1], sites[lower, 0]))]
    dx = np.abs(sites[iu, 0] - sites[il, 0])
    dy = np.abs(sites[iu, 1] + sites[il, 1])
    bad = np.flatnonzero((dx > tol) | (dy > tol))
    if bad.size:
        k = int(bad[0])
        raise PairingError(
            f"volumes {iu[k]} and {il[k]} do not mirror "
            f"(site gap {max(dx[k], dy[k]):.3e})")
    return [(int(i), int(j)) for i, j in zip(iu, il)] + [
        (int(i), int(i)) for i in center]


def asymmetry_metric(mesh: Mesh, solution: SolutionField) -> float:
    """Max over mirrored volume pairs of |p_i - p_j| / p_stagnation."""
    p = solution.primitives()[:, 3]
    pairs = mirror_pairs(mesh)
    p_stag = float(np.max(p))
    worst = 0.0
    for i, j in pairs:
        worst = max(worst, abs(p[i] - p[j]))
    return worst / p_stag


def shock_front_roughness(mesh: Mesh, solution: SolutionField,
                          freestream_p=1.0, n_bins=None):
    """Normalized second-difference deviation of the detected shock front.

    Bins volumes by angle, finds the pressure-jump-weighted shock radius per
    bin, and returns the standard deviation of the angular second differences
    of that radius divided by the local radial spacing. Returns None when no
    shock is present (max pressure below 2x freestream).
    """
    W = solution.primitives()
    p = W[:, 3]
    if float(np.max(p)) <= 2.0 * freestream_p:
        return None
    sites = mesh.site
    theta = np.arctan2(sites[:, 1], sites[:, 0])
    theta = np.where(theta < 0.0, theta + 2.0 * np.pi, theta)  # [pi/2, 3pi/2]
    radius = np.hypot(sites[:, 0], sites[:, 1])
    if n_bins is None:
        n_bins = int(mesh.meta.get("n_circumferential", 0)) or max(
            8, int(np.sqrt(mesh.n_volumes)))
    edges = np.linspace(theta.min() - 1e-12, theta.max() + 1e-12, n_bins + 1)
    which = np.digitize(theta, edges) - 1

    r_shock, spacing, keep = [], [], []
    for b in range(n_bins):
        sel = np.flatnonzero(which == b)
        if len(sel) < 4:
            continue
        srt = sel[np.argsort(radius[sel])]
        r = radius[srt]
        pb = p[srt]
        if float(pb.max()) <= 2.0 * freestream_p:
            continue
        dp = np.abs(np.diff(pb))
        k = int(np.argmax(dp))
        if dp[k] <= 0.0:
            continue
        # contiguous window of strong gradient around the peak jump
        lo = k
        while lo > 0 and dp[lo - 1] >= 0.3 * dp[k]:
            lo -= 1
        hi = k
        while hi < len(dp) - 1 and dp[hi + 1] >= 0.3 * dp[k]:
            hi += 1
        w = dp[lo:hi + 1]
        rm = 0.5 * (r[lo:hi + 1] + r[lo + 1:hi + 2])
        r_shock.append(float(np.sum(rm * w) / np.sum(w)))
        spacing.append(float(np.mean(np.diff(r[max(0, k - 2):k + 4]))))
        keep.append(b)
    if len(r_shock) < 5:
        return None
    r_shock = np.asarray(r_shock)
    spacing = np.asarray(spacing)
    d2 = r_shock[:-2] - 2.0 * r_shock[1:-1] + r_shock[2:]
    return float(np.std(d2 / spacing[1:-1]))


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

def export_vtk(mesh: Mesh, solution: SolutionField, path, extra=None):
    """Legacy ASCII unstructured-grid VTK with cell data rho, u, v, p, Mach
    plus any provided extra per-volume scalar arrays."""
    W = solution.primitives()
    gamma = solution.gas.gamma
    mach = np.hypot(W[:, 1], W[:, 2]) / np.sqrt(gamma * W[:, 3] / W[:, 0])
    fields = {"rho": W[:, 0], "u": W[:, 1], "v": W[:, 2], "p": W[:, 3],
              "Mach": mach}
    if extra:
        fields.update(extra)

    n = mesh.n_volumes
    out = ["# vtk DataFile Version 3.0", "shocklab solution", "ASCII",
           "DATASET UNSTRUCTURED_GRID", f"POINTS {len(mesh.nodes)} double"]
    for x, y in mesh.nodes:
        out.append(f"{x:.12g} {y:.12g} 0")
    size = n + mesh.cell_ptr[-1]
    out.append(f"CELLS {n} {size}")
    types = []
    for i in range(n):
        poly = mesh.cell(i)
        out.append(f"{len(poly)} " + " ".join(str(int(v)) for v in poly))
        types.append(5 if len(poly) == 3 else 9 if len(poly) == 4 else 7)
    out.append(f"CELL_TYPES {n}")
    out.extend(str(t) for t in types)
    out.append(f"CELL_DATA {n}")
    for name, arr in fields.items():
        out.append(f"SCALARS {name} double 1")
        out.append("LOOKUP_TABLE default")
        out.extend(f"{v:.9e}" for v in np.asarray(arr, dtype=float))
    with open(path, "w") as fh:
        fh.write("\n".join(out) + "\n")


def export_history(history: ResidualHistory, path):
    """CSV `iteration,residual`, residual relative to iteration 1."""
    with open(path, "w") as fh:
        fh.write("iteration,residual\n")
        for it, res in zip(history.iterations, history.residuals):
            fh.write(f"{it},{res:.8e}\n")


def run_report(config, solution: SolutionField, history: ResidualHistory,
               converged, asymmetry=None, roughness=None, wall_time=None):
    """Flat key/value report of one run."""
    rep = {
        "scheme": config.scheme.value,
        "grid_kind": config.grid_kind,
        "discretization": config.discretization,
        "order": config.order,
        "limiter": config.limiter.value,
        "limiter_k": config.limiter_k,
        "mach": config.mach,
        "gamma": config.gamma,
        "n_radial": config.n_radial,
        "n_circumferential": config.n_circumferential,
        "cfl": config.cfl,
        "max_iters": config.max_iters,
        "residual_tol": config.residual_tol,
        "iterations": solution.iterations,
        "final_residual": solution.residual,
        "residual_drop_orders": history.drop_orders,
        "converged": bool(converged),
        "asymmetry": asymmetry,
        "shock_roughness": roughness,
        "limiter_fallbacks": solution.limiter_fallbacks,
        "cfl_reductions": solution.cfl_reductions,
    }
    if wall_time is not None:
        rep["wall_time_s"] = round(wall_time, 3)
    return rep


def write_report(report: dict, path):
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, default=float)
        fh.write("\n")
