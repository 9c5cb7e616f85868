"""INI case/sweep configuration.

Flat key=value sections ([case]/[grid]/[scheme]/[run]/[output]); unknown keys
are hard errors so typos cannot silently fall back to defaults. The six
sweepable keys (grid.kind, case.discretization, scheme.name, scheme.order,
scheme.limiter, scheme.limiter_k) accept comma-separated lists, which turns
the file into a Cartesian sweep.
"""

import configparser
import itertools
from dataclasses import dataclass, field

from .errors import ConfigError
from .fluxes import FluxScheme
from .recon import LimiterKind
from .solver import CaseConfig

_SCHEMA = {
    "case": {"mach", "gamma", "discretization"},
    "grid": {"kind", "n_radial", "n_circumferential", "r_cylinder",
             "r_outer", "seed", "path"},
    "scheme": {"name", "order", "limiter", "limiter_k", "entropy_fix",
               "entropy_delta", "tv_pressure"},
    "run": {"cfl", "max_iters", "residual_tol", "deterministic"},
    "output": {"dir", "vtk", "history", "report"},
}

_SWEEPABLE = {("grid", "kind"), ("case", "discretization"),
              ("scheme", "name"), ("scheme", "order"),
              ("scheme", "limiter"), ("scheme", "limiter_k")}

SWEEP_WARN_CASES = 200


@dataclass
class SweepSpec:
    """Cartesian product over the sweepable axes with shared settings."""

    grid_kinds: list
    discretizations: list
    schemes: list
    orders: list
    limiters: list
    k_values: list
    base: dict = field(default_factory=dict)
    out_dir: str = "out"

    def __post_init__(self):
        for name in ("grid_kinds", "discretizations", "schemes", "orders",
                     "limiters", "k_values"):
            if not getattr(self, name):
                raise ConfigError(f"sweep axis {name} is empty")

    def cases(self):
        """(label, CaseConfig) pairs in deterministic axis order."""
        out = []
        for kind, disc, sch, order, lim, k in itertools.product(
                self.grid_kinds, self.discretizations, self.schemes,
                self.orders, self.limiters, self.k_values):
            kw = dict(self.base)
            kw.update(grid_kind=kind, discretization=disc,
                      scheme=FluxScheme.from_name(sch), order=int(order),
                      limiter=LimiterKind.from_name(lim), limiter_k=float(k))
            label = f"{kind}_{disc}_{sch}_o{order}_{lim}_k{k:g}"
            out.append((label, CaseConfig(**kw)))
        return out

    @property
    def n_cases(self):
        return (len(self.grid_kinds) * len(self.discretizations)
                * len(self.schemes) * len(self.orders) * len(self.limiters)
                * len(self.k_values))


def _bool(text):
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _get(cp, sec, key, default=None):
    if cp.has_option(sec, key):
        return cp.get(sec, key).strip()
    return default


def _split(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def parse_config(path):
    """Returns a CaseConfig, or a SweepSpec when any sweepable key holds a
    comma-separated list."""
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    read = cp.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")

    for sec in cp.sections():
        if sec not in _SCHEMA:
            raise ConfigError(f"unknown section [{sec}]")
        for key in cp.options(sec):
            if key not in _SCHEMA[sec]:
                raise ConfigError(f"unknown key '{key}' in section [{sec}]")

    mach = _get(cp, "case", "mach")
    if mach is None:
        raise ConfigError("missing required key case.mach")
    kind = _get(cp, "grid", "kind")
    if kind is None:
        raise ConfigError("missing required key grid.kind")
    scheme = _get(cp, "scheme", "name")
    if scheme is None:
        raise ConfigError("missing required key scheme.name")

    try:
        base = dict(
            mach=float(mach),
            gamma=float(_get(cp, "case", "gamma", "1.4")),
            n_radial=int(_get(cp, "grid", "n_radial", "80")),
            n_circumferential=int(_get(cp, "grid", "n_circumferential", "120")),
            r_cylinder=float(_get(cp, "grid", "r_cylinder", "1.0")),
            r_outer=float(_get(cp, "grid", "r_outer", "4.0")),
            seed=int(_get(cp, "grid", "seed", "0")),
            mesh_path=_get(cp, "grid", "path", ""),
            entropy_fix=_get(cp, "scheme", "entropy_fix", "none"),
            entropy_delta=float(_get(cp, "scheme", "entropy_delta", "0.1")),
            tv_pressure=_get(cp, "scheme", "tv_pressure", "linearized"),
            cfl=float(_get(cp, "run", "cfl", "0.5")),
            max_iters=int(_get(cp, "run", "max_iters", "50000")),
            residual_tol=float(_get(cp, "run", "residual_tol", "1e-8")),
            deterministic=_bool(_get(cp, "run", "deterministic", "true")),
            out_dir=_get(cp, "output", "dir", "out"),
            write_vtk=_bool(_get(cp, "output", "vtk", "true")),
            write_history=_bool(_get(cp, "output", "history", "true")),
            write_report=_bool(_get(cp, "output", "report", "true")),
        )
    except ValueError as exc:
        raise ConfigError(f"bad value in config: {exc}") from exc
    if base["entropy_fix"] not in ("none", "harten"):
        raise ConfigError(f"bad entropy_fix {base['entropy_fix']!r}")
    if base["tv_pressure"] not in ("linearized", "isentropic"):
        raise ConfigError(f"bad tv_pressure {base['tv_pressure']!r}")

    axes = dict(
        grid_kinds=_split(kind),
        discretizations=_split(_get(cp, "case", "discretization", "cell")),
        schemes=_split(scheme),
        orders=_split(_get(cp, "scheme", "order", "1")),
        limiters=_split(_get(cp, "scheme", "limiter", "none")),
        k_values=_split(_get(cp, "scheme", "limiter_k", "1.0")),
    )
    for disc in axes["discretizations"]:
        if disc not in ("cell", "vertex"):
            raise ConfigError(f"bad discretization {disc!r}")
    for k in axes["grid_kinds"]:
        if k not in ("quad", "regular_tri", "irregular_tri", "file"):
            raise ConfigError(f"bad grid kind {k!r}")

    if all(len(v) == 1 for v in axes.values()):
        try:
            return CaseConfig(
                scheme=FluxScheme.from_name(axes["schemes"][0]),
                grid_kind=axes["grid_kinds"][0],
                discretization=axes["discretizations"][0],
                order=int(axes["orders"][0]),
                limiter=LimiterKind.from_name(axes["limiters"][0]),
                limiter_k=float(axes["k_values"][0]),
                **base,
            )
        except ValueError as exc:
            raise ConfigError(f"bad value in config: {exc}") from exc
    out_dir = base.pop("out_dir")
    return SweepSpec(base=base, out_dir=out_dir, **axes)


def effective_config_text(config: CaseConfig) -> str:
    """Round-trippable dump of the fully defaulted configuration."""
    return "\n".join([
        "[case]",
        f"mach = {config.mach:g}",
        f"gamma = {config.gamma:g}",
        f"discretization = {config.discretization}",
        "",
        "[grid]",
        f"kind = {config.grid_kind}",
        f"n_radial = {config.n_radial}",
        f"n_circumferential = {config.n_circumferential}",
        f"r_cylinder = {config.r_cylinder:g}",
        f"r_outer = {config.r_outer:g}",
        f"seed = {config.seed}",
        f"path = {config.mesh_path}",
        "",
        "[scheme]",
        f"name = {config.scheme.value}",
        f"order = {config.order}",
        f"limiter = {config.limiter.value}",
        f"limiter_k = {config.limiter_k:g}",
        f"entropy_fix = {config.entropy_fix}",
        f"entropy_delta = {config.entropy_delta:g}",
        f"tv_pressure = {config.tv_pressure}",
        "",
        "[run]",
        f"cfl = {config.cfl:g}",
        f"max_iters = {config.max_iters}",
        f"residual_tol = {config.residual_tol:g}",
        f"deterministic = {str(config.deterministic).lower()}",
        "",
        "[output]",
        f"dir = {config.out_dir}",
        f"vtk = {str(config.write_vtk).lower()}",
        f"history = {str(config.write_history).lower()}",
        f"report = {str(config.write_report).lower()}",
    ]) + "\n"
