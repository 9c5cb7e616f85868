"""Command-line front end: mesh generation, single runs, sweeps, 1D checks."""

import argparse
import concurrent.futures
import csv
import os
import sys
import time

from . import _kernels, diag
from .config import SWEEP_WARN_CASES, SweepSpec, effective_config_text, parse_config
from .errors import DivergenceError, ShockLabError
from .fluxes import FluxScheme
from .indicator import face_weights
from .mesh import write_mesh
from .solver import CaseConfig, make_mesh, run_steady, sod_verification


def _progress(label, verbose):
    if not verbose:
        return None

    def cb(it, res):
        print(f"  [{label}] iter {it:6d}  residual {res:.3e}", flush=True)

    return cb


def _case_outputs(config: CaseConfig, mesh, solution, history, converged,
                  wall_time, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    asym = rough = None
    try:
        asym = diag.asymmetry_metric(mesh, solution)
    except diag.PairingError:
        pass
    rough = diag.shock_front_roughness(mesh, solution)
    report = diag.run_report(config, solution, history, converged,
                             asymmetry=asym, roughness=rough,
                             wall_time=wall_time)
    if config.write_vtk:
        extra = {}
        if config.scheme.is_hybrid:
            W = solution.primitives()
            omega = face_weights(mesh, W[:, 3])
            import numpy as np
            acc = np.zeros(mesh.n_volumes)
            cnt = np.zeros(mesh.n_volumes)
            np.add.at(acc, mesh.face_left, omega)
            np.add.at(cnt, mesh.face_left, 1.0)
            ok = mesh.face_right >= 0
            np.add.at(acc, mesh.face_right[ok], omega[ok])
            np.add.at(cnt, mesh.face_right[ok], 1.0)
            extra["shock_indicator"] = acc / cnt
        diag.export_vtk(mesh, solution, os.path.join(out_dir, "solution.vtk"),
                        extra=extra)
    if config.write_history:
        diag.export_history(history, os.path.join(out_dir, "history.csv"))
    if config.write_report:
        diag.write_report(report, os.path.join(out_dir, "report.json"))
    with open(os.path.join(out_dir, "effective_config.ini"), "w") as fh:
        fh.write(effective_config_text(config))
    return report


def cmd_run(args) -> int:
    try:
        config = parse_config(args.config)
    except ShockLabError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if isinstance(config, SweepSpec):
        print("config describes a sweep; use the sweep subcommand",
              file=sys.stderr)
        return 2
    if args.out:
        config.out_dir = args.out
    t0 = time.time()
    try:
        mesh = make_mesh(config)
        solution, history, converged = run_steady(
            config, mesh, progress=_progress("run", args.verbose))
    except DivergenceError as exc:
        print(f"diverged: {exc}", file=sys.stderr)
        return 3
    except ShockLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = _case_outputs(config, mesh, solution, history, converged,
                           time.time() - t0, config.out_dir)
    print(f"{'converged' if converged else 'iteration-capped'} after "
          f"{solution.iterations} iterations; residual drop "
          f"{report['residual_drop_orders']:.2f} orders")
    print(f"outputs in {config.out_dir}")
    return 0


_REPORT_FIELDS = [
    "label", "status", "scheme", "grid_kind", "discretization", "order",
    "limiter", "limiter_k", "mach", "iterations", "converged",
    "final_residual", "residual_drop_orders", "asymmetry", "shock_roughness",
    "limiter_fallbacks", "cfl_reductions", "wall_time_s",
]


def _run_sweep_case(item):
    label, config, out_root = item
    out_dir = os.path.join(out_root, label)
    t0 = time.time()
    try:
        mesh = make_mesh(config)
        solution, history, converged = run_steady(config, mesh)
        report = _case_outputs(config, mesh, solution, history, converged,
                               time.time() - t0, out_dir)
        report["label"] = label
        report["status"] = "ok"
    except DivergenceError:
        report = {"label": label, "status": "diverged",
                  "scheme": config.scheme.value,
                  "grid_kind": config.grid_kind,
                  "discretization": config.discretization,
                  "order": config.order, "limiter": config.limiter.value,
                  "limiter_k": config.limiter_k, "mach": config.mach,
                  "converged": False,
                  "wall_time_s": round(time.time() - t0, 3)}
    return report


def cmd_sweep(args) -> int:
    try:
        spec = parse_config(args.config)
    except ShockLabError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if isinstance(spec, CaseConfig):
        case = spec
        label = (f"{case.grid_kind}_{case.discretization}_"
                 f"{case.scheme.value}_o{case.order}_{case.limiter.value}"
                 f"_k{case.limiter_k:g}")
        items_src = [(label, case)]
        out_root = args.out or case.out_dir
        n_cases = 1
    else:
        items_src = spec.cases()
        out_root = args.out or spec.out_dir
        n_cases = spec.n_cases
    if n_cases > SWEEP_WARN_CASES:
        print(f"warning: sweep expands to {n_cases} cases", file=sys.stderr)
    os.makedirs(out_root, exist_ok=True)
    items = [(label, cfg, out_root) for label, cfg in items_src]

    if args.threads > 1:
        with concurrent.futures.ProcessPoolExecutor(args.threads) as pool:
            reports = list(pool.map(_run_sweep_case, items))
    else:
        reports = []
        for item in items:
            print(f"running {item[0]} ...", flush=True)
            reports.append(_run_sweep_case(item))

    path = os.path.join(out_root, "sweep_report.csv")
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=_REPORT_FIELDS, extrasaction="ignore")
        w.writeheader()
        for rep in reports:
            w.writerow(rep)
    print(f"sweep report: {path}")
    return 0


def cmd_sod(args) -> int:
    if args.cells < 10:
        print("sod needs --cells >= 10", file=sys.stderr)
        return 2
    scheme = args.scheme if args.scheme == "godunov" \
        else FluxScheme.from_name(args.scheme)
    e1 = sod_verification(args.cells, args.t_end, scheme)
    e2 = sod_verification(2 * args.cells, args.t_end, scheme)
    import numpy as np
    order = float(np.log2(e1 / e2)) if e2 > 0 else float("inf")
    print(f"L1 density error @ {args.cells:4d} cells: {e1:.5f}")
    print(f"L1 density error @ {2 * args.cells:4d} cells: {e2:.5f}")
    print(f"observed order: {order:.2f}")
    return 0


def cmd_mesh(args) -> int:
    try:
        config = parse_config(args.config)
    except ShockLabError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if isinstance(config, SweepSpec):
        print("mesh subcommand needs a single-case config", file=sys.stderr)
        return 2
    if config.discretization == "vertex":
        print("note: mesh files store the primal grid; the median dual is "
              "built at run time")
        config.discretization = "cell"
    mesh = make_mesh(config)
    write_mesh(mesh, args.out)
    print(f"wrote {mesh.n_volumes} cells / {len(mesh.nodes)} nodes to {args.out}")
    return 0


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="shocklab",
        description="2D unstructured finite-volume Euler solver for shock "
                    "instability studies")
    ap.add_argument("--kernels", choices=("auto", "python", "cython"),
                    default="auto", help="kernel backend (default auto)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one case from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="")
    p.add_argument("--deterministic", action="store_true", default=True)
    p.add_argument("--verbose", action="store_true")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("sweep", help="run a scheme/grid/limiter sweep")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="")
    p.add_argument("--deterministic", action="store_true", default=True)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("sod", help="1D Sod verification with refinement pair")
    p.add_argument("--cells", type=int, required=True)
    p.add_argument("--scheme", required=True,
                   help="flux scheme name or 'godunov'")
    p.add_argument("--t-end", type=float, default=0.2)
    p.set_defaults(fn=cmd_sod)

    p = sub.add_parser("mesh", help="generate a mesh file from a config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_mesh)

    args = ap.parse_args(argv)
    if args.kernels != "auto" and args.kernels != _kernels.backend_name():
        # backend selection is import-time; respawned workers inherit this
        os.environ["SHOCKLAB_KERNELS"] = args.kernels
        print(f"note: kernels already imported as '{_kernels.backend_name()}'"
              f"; set SHOCKLAB_KERNELS={args.kernels} to force at startup",
              file=sys.stderr)
    try:
        return args.fn(args)
    except ShockLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
