#!/usr/bin/env python3
"""Calibration run for the comparative acceptance thresholds.

Runs the full scheme/grid/limiter matrix at desk scale (80 radial x 120
circumferential, Ma 8, gamma 1.4) and records the instability metrics and
convergence behavior of every case as JSON. The acceptance suite's ratio
thresholds were fixed from these numbers; rerun with

    python scripts/calibrate.py [out.json]

to regenerate them after any solver change.
"""

import json
import sys
import time

from shocklab import diag
from shocklab.fluxes import FluxScheme
from shocklab.recon import LimiterKind
from shocklab.solver import CaseConfig, make_mesh, run_steady

GRID = dict(n_radial=80, n_circumferential=120, r_cylinder=1.0, r_outer=4.0,
            seed=7)
ORDER1 = dict(cfl=0.8, max_iters=20000, residual_tol=1e-8)
ORDER2 = dict(cfl=0.5, max_iters=50000, residual_tol=1e-8)

CASES = [
    # label, scheme, grid kind, discretization, order, limiter, K, controls
    ("vanleer_g1", FluxScheme.VAN_LEER, "quad", "cell", 1, "none", 1.0, ORDER1),
    ("roe_g1", FluxScheme.ROE, "quad", "cell", 1, "none", 1.0, ORDER1),
    ("slau_g2", FluxScheme.SLAU, "regular_tri", "cell", 1, "none", 1.0, ORDER1),
    ("slauhyb_g2", FluxScheme.SLAU_HYBRID, "regular_tri", "cell", 1, "none", 1.0, ORDER1),
    ("slauhyb_g3", FluxScheme.SLAU_HYBRID, "irregular_tri", "cell", 1, "none", 1.0, ORDER1),
    ("tvhyb_g3", FluxScheme.TV_HYBRID, "irregular_tri", "cell", 1, "none", 1.0, ORDER1),
    ("roe_g1_vertex", FluxScheme.ROE, "quad", "vertex", 1, "none", 1.0, ORDER1),
    ("roe_g2_vertex", FluxScheme.ROE, "regular_tri", "vertex", 1, "none", 1.0, ORDER1),
    ("roe_g3_vertex", FluxScheme.ROE, "irregular_tri", "vertex", 1, "none", 1.0, ORDER1),
    ("venkat_g1_o2", FluxScheme.VAN_LEER, "quad", "cell", 2, "venkatakrishnan", 1.0, ORDER2),
    ("barth_g1_o2", FluxScheme.VAN_LEER, "quad", "cell", 2, "barth", 1.0, ORDER2),
    ("mlp_g1_o2", FluxScheme.VAN_LEER, "quad", "cell", 2, "mlp", 1.0, ORDER2),
    ("mlppw_k1_g1_o2", FluxScheme.VAN_LEER, "quad", "cell", 2, "mlp_pw", 1.0, ORDER2),
    ("mlppw_k10_g1_o2", FluxScheme.VAN_LEER, "quad", "cell", 2, "mlp_pw", 10.0, ORDER2),
]


def run_case(label, scheme, kind, disc, order, limiter, k, controls):
    config = CaseConfig(mach=8.0, scheme=scheme, grid_kind=kind,
                        discretization=disc, order=order,
                        limiter=LimiterKind.from_name(limiter), limiter_k=k,
                        **GRID, **controls)
    t0 = time.time()
    mesh = make_mesh(config)
    try:
        solution, history, converged = run_steady(config, mesh)
        status = "ok"
    except Exception as exc:  # record, keep calibrating
        return {"label": label, "status": f"failed: {exc}",
                "wall_s": round(time.time() - t0, 1)}
    try:
        asym = diag.asymmetry_metric(mesh, solution)
    except diag.PairingError:
        asym = None
    rough = diag.shock_front_roughness(mesh, solution)
    return {
        "label": label, "status": status,
        "scheme": scheme.value, "grid": kind, "disc": disc, "order": order,
        "limiter": limiter, "K": k,
        "iterations": solution.iterations,
        "converged": bool(converged),
        "drop_orders": history.drop_orders,
        "final_residual": solution.residual,
        "asymmetry": asym,
        "roughness": rough,
        "cfl_reductions": solution.cfl_reductions,
        "limiter_fallbacks": solution.limiter_fallbacks,
        "wall_s": round(time.time() - t0, 1),
    }


def main():
    out_path = sys.argv[1] if len(sys.argv) > 1 else "calibration.json"
    results = []
    for case in CASES:
        print(f"[{time.strftime('%H:%M:%S')}] running {case[0]} ...", flush=True)
        rec = run_case(*case)
        print(f"    -> {json.dumps(rec)}", flush=True)
        results.append(rec)
        with open(out_path, "w") as fh:  # checkpoint after each case
            json.dump(results, fh, indent=2)
    print(f"wrote {out_path}")


if __name__ == "__main__":
    main()
