"""Command-line front end.

    vacdens boundary        [--eta S] [--z-min Z] [--z-max Z] [--samples N]
    vacdens point-source    [--alpha A] [--gamma-c G] [--r-min R] [--r-max R] ...
    vacdens point-source check
    vacdens cavity density  [--L0 M] [--M KG] [--omega-osc W] [--omega-cut W | --n-modes N] ...
    vacdens cavity averaged [... --sigma-over-L0 S]
    vacdens cavity casimir  [--eps 0.04,0.02,0.01]

Profiles are written as CSV ('#' comment lines, header, rows) to stdout or
``--out``.  Exit codes: 0 success, 2 configuration/usage error, 3 numerical
or I/O failure.
"""
from __future__ import annotations

import argparse
import io
import math
import sys
import warnings
from dataclasses import dataclass, field
from functools import partial
from typing import BinaryIO, Sequence

import numpy as np

from . import boundary, cavity, pointsource
from .config import (KEYS, ConfigError, RunConfig, build_config, derive_dimensionless,
                     parse_assignments)
from .parallel import map_ordered
from .quadrature import QuadratureError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

SUBCOMMANDS = ("boundary", "point-source", "cavity")


class UsageError(Exception):
    pass


@dataclass
class OutputTable:
    column_names: list[str]
    rows: list[tuple[float, ...]] = field(default_factory=list)
    comments: list[str] = field(default_factory=list)

    def validate(self):
        width = len(self.column_names)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} values, expected {width}")
            if not all(math.isfinite(v) for v in row):
                raise ValueError(f"row {i} contains a non-finite value")


def format_number(value: float) -> str:
    # 17 significant digits: round-trips exactly, locale independent
    return f"{float(value):.16e}"


def write_csv(table: OutputTable, sink: BinaryIO) -> None:
    table.validate()
    out = io.StringIO(newline="")
    for comment in table.comments:
        out.write(f"# {comment}\n")
    out.write(",".join(table.column_names) + "\n")
    for row in table.rows:
        out.write(",".join(format_number(v) for v in row) + "\n")
    sink.write(out.getvalue().encode("utf-8"))


def write_report(pairs: Sequence[tuple[str, object]], sink: BinaryIO) -> None:
    lines = []
    for key, value in pairs:
        text = format_number(value) if isinstance(value, float) else str(value)
        lines.append(f"{key}={text}\n")
    sink.write("".join(lines).encode("utf-8"))


# --- argument parsing ------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# flag dest -> config key; "samples" is resolved per subcommand
_FLAG_KEYS = {
    "eta": "eta", "z_min": "z_min", "z_max": "z_max",
    "alpha": "alpha", "gamma_c": "gamma_c", "r_min": "r_min", "r_max": "r_max",
    "log_spacing": "log_spacing",
    "L0": "L0", "M": "M", "omega_osc": "omega_osc", "omega_cut": "omega_cut",
    "n_modes": "n_modes", "sigma_over_L0": "sigma_over_L0", "x_min": "x_min", "x_max": "x_max",
    "rel_tol": "rel_tol",
}
_SAMPLE_KEYS = {"boundary": "z_samples", "point-source": "r_samples", "cavity": "x_samples"}


def _common(p):
    p.add_argument("--config", metavar="PATH", help="key = value configuration file")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    p.add_argument("--workers", type=int, default=1,
                   help="worker processes for profile sampling (0 = all cores)")
    p.add_argument("--rel-tol", dest="rel_tol")
    p.add_argument("--samples")


def _cavity_flags(p):
    p.add_argument("--L0")
    p.add_argument("--M")
    p.add_argument("--omega-osc", dest="omega_osc")
    p.add_argument("--omega-cut", dest="omega_cut")
    p.add_argument("--n-modes", dest="n_modes")
    p.add_argument("--sigma-over-L0", dest="sigma_over_L0")
    p.add_argument("--x-min", dest="x_min")
    p.add_argument("--x-max", dest="x_max")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vacdens", description="Regularized vacuum energy densities.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    b = sub.add_parser("boundary", help="fluctuation profile outside a conducting wall")
    _common(b)
    b.add_argument("--eta")
    b.add_argument("--z-min", dest="z_min")
    b.add_argument("--z-max", dest="z_max")

    ps = sub.add_parser("point-source", help="densities around a polarizable point source")
    ps.add_argument("action", nargs="?", choices=["check"], help="scalar diagnostics report")
    _common(ps)
    ps.add_argument("--alpha")
    ps.add_argument("--gamma-c", dest="gamma_c")
    ps.add_argument("--r-min", dest="r_min")
    ps.add_argument("--r-max", dest="r_max")
    spacing = ps.add_mutually_exclusive_group()
    spacing.add_argument("--log-spacing", dest="log_spacing", action="store_const", const="true")
    spacing.add_argument("--linear-spacing", dest="log_spacing", action="store_const", const="false")

    cav = sub.add_parser("cavity", help="1D cavity with a mobile wall")
    cav_sub = cav.add_subparsers(dest="action", parser_class=_Parser)
    for name, helptext in (("density", "unaveraged energy-density change"),
                           ("averaged", "density averaged over the wall position"),
                           ("casimir", "free 1D Casimir density with cutoff extrapolation")):
        c = cav_sub.add_parser(name, help=helptext)
        _common(c)
        _cavity_flags(c)
        if name == "casimir":
            c.add_argument("--eps", default="0.04,0.02,0.01",
                           help="comma-separated cutoff values in (0, 0.5]")
    return parser


def _load_config(args) -> RunConfig:
    values: dict = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        values.update(parse_assignments(text))
    overrides = {}
    for dest, key in _FLAG_KEYS.items():
        raw = getattr(args, dest, None)
        if raw is not None:
            overrides[key] = raw
    if getattr(args, "samples", None) is not None:
        overrides[_SAMPLE_KEYS[args.command]] = args.samples
    for key, raw in overrides.items():
        try:
            value = KEYS[key][2](raw)
        except ValueError:
            raise ConfigError(f"malformed value for --{key.replace('_', '-')}: {raw!r}") from None
        if isinstance(value, float) and not math.isfinite(value):
            raise ConfigError(f"{key} must be finite")
        values[key] = (value, None)
    if "n_modes" in overrides and "omega_cut" not in overrides:
        values["omega_cut"] = (None, None)
    elif "omega_cut" in overrides and "n_modes" not in overrides:
        values["n_modes"] = (None, None)
    return build_config(values)


# --- subcommands --------------------------------------------------------------------

def _boundary(cfg: RunConfig, args) -> OutputTable:
    bc = cfg.boundary
    zs = np.linspace(bc.z_min, bc.z_max, bc.samples)
    if bc.z_min == 0.0:
        # the ideal limit is undefined at the interface; shift the grid off it
        zs = np.linspace(0.0, bc.z_max, bc.samples + 1)[1:]
    (zlo, vlo), (zhi, vhi) = boundary.extrema()
    consts = cfg.constants
    table = OutputTable(["z_over_ceta", "e2_renorm", "b2_renorm", "e2_ideal"])
    table.comments += [
        "renormalized field fluctuations outside a perfect conductor",
        f"eta_s = {format_number(bc.eta)}",
        f"cutoff_frequency_per_s = {format_number(1.0 / bc.eta)}",
        f"length_unit_c_eta_m = {format_number(consts.c * bc.eta)}",
        f"fluctuation_unit_SI = {format_number(boundary.fluctuation_unit(bc.eta, consts))}",
        f"vacuum_term = {format_number(boundary.vacuum_term())}",
        f"minimum: z_over_ceta = {format_number(zlo)}, e2_renorm = {format_number(vlo)}",
        f"maximum: z_over_ceta = {format_number(zhi)}, e2_renorm = {format_number(vhi)}",
        f"integral_e2_renorm = {format_number(boundary.integral_check(cfg.rel_tol))}",
    ]
    e2 = boundary.e2_renorm(zs)
    b2 = boundary.b2_renorm(zs)
    ideal = boundary.ideal_limit_e2(zs)
    table.rows = [tuple(map(float, r)) for r in zip(zs, e2, b2, ideal)]
    return table


def _source_row(r, rel_tol):
    d = pointsource.densities(r, 1.0, rel_tol)
    return (d.r_hat, d.u_electric, d.u_magnetic, d.u_total)


def _point_source(cfg: RunConfig, args) -> OutputTable:
    sc = cfg.source
    n = sc.grid_size()
    if sc.log_spacing:
        rs = np.logspace(math.log10(sc.r_min), math.log10(sc.r_max), n)
    else:
        rs = np.linspace(sc.r_min, sc.r_max, n)
    rows = map_ordered(partial(_source_row, rel_tol=cfg.rel_tol), rs, args.workers)
    table = OutputTable(["r_over_gamma_c", "u_electric", "u_magnetic", "u_total"], rows)
    table.comments += [
        "energy densities around a polarizable point source, units alpha hbar c / gamma_c^7",
        f"alpha = {format_number(sc.alpha)}",
        f"gamma_c_m = {format_number(sc.gamma_c)}",
        f"density_unit_SI = {format_number(pointsource.density_unit(sc.alpha, sc.gamma_c, cfg.constants))}",
    ]
    return table


def _point_source_check(cfg: RunConfig) -> list[tuple[str, object]]:
    tol = cfg.rel_tol
    fe = pointsource.far_coefficient("electric", 1e4, tol)
    fm = pointsource.far_coefficient("magnetic", 1e4, tol)
    se = pointsource.self_energy("electric", 1.0, tol)
    sm = pointsource.self_energy("magnetic", 1.0, tol)
    st = pointsource.self_energy("total", 1.0, tol)
    return [
        ("r_probe", 1e4),
        ("far_coefficient_electric", fe),
        ("far_coefficient_magnetic", fm),
        ("far_ratio", fe / fm),
        ("self_energy_electric", se),
        ("self_energy_magnetic", sm),
        ("self_energy_total", st),
        ("self_energy_closed_electric", pointsource.self_energy_closed("electric")),
        ("cancellation_ratio", abs(st) / abs(se)),
        ("energy_unit_SI", pointsource.energy_unit(cfg.source.alpha, cfg.source.gamma_c,
                                                   cfg.constants)),
    ]


def _cavity_header(cfg: RunConfig, caught):
    params = derive_dimensionless(cfg.cavity, cfg.constants)
    with warnings.catch_warnings(record=True) as rec:
        warnings.simplefilter("always", cavity.PerturbativeWarning)
        state = cavity.wall_excitation(params)
    caught.extend(str(w.message) for w in rec)
    comments = [
        f"omega_hat = {format_number(params.omega_hat)}",
        f"mu = {format_number(params.mu)}",
        f"N = {params.n_modes}",
        f"N_b = {format_number(state.n_b)}",
        f"SI_prefactor_J_per_m = {format_number(cavity.density_unit_si(params, cfg.cavity.L0, cfg.constants))}",
    ]
    comments += [f"warning: {msg}" for msg in caught]
    return params, state, comments


def _cavity_grid(cfg: RunConfig):
    c = cfg.cavity
    return np.linspace(c.x_min, c.x_max, c.samples)


def _cavity_density(cfg: RunConfig, args, caught) -> OutputTable:
    params, _, comments = _cavity_header(cfg, caught)
    xs = _cavity_grid(cfg)
    table = cavity.build_inner_sum_table(params)
    values = cavity.density_profile(xs, table, args.workers)
    out = OutputTable(["x_over_L0", "S"], comments=["energy-density change near the mobile wall"] + comments)
    out.rows = [(float(x), float(s)) for x, s in zip(xs, values)]
    return out


def _cavity_averaged(cfg: RunConfig, args, caught) -> OutputTable:
    params, state, comments = _cavity_header(cfg, caught)
    xs = _cavity_grid(cfg)
    table = cavity.build_inner_sum_table(params)
    raw = cavity.density_profile(xs, table, args.workers)
    ground = cavity.averaged_profile(xs, table, state, 0, args.workers)
    excited = cavity.averaged_profile(xs, table, state, 1, args.workers)
    mixed = cavity.averaged_profile(xs, table, state, None, args.workers)
    # positivity of the averaged sum is not guaranteed; report rather than assert
    comments.append(f"averaged_min = {format_number(float(np.min(mixed)))}")
    out = OutputTable(["x_over_L0", "S", "avg_ground", "avg_excited", "averaged"],
                      comments=["energy-density change averaged over the wall position"] + comments)
    out.rows = [tuple(map(float, r)) for r in zip(xs, raw, ground, excited, mixed)]
    return out


def _cavity_casimir(cfg: RunConfig, args) -> OutputTable:
    try:
        eps = sorted((float(e) for e in args.eps.split(",") if e.strip()), reverse=True)
    except ValueError:
        raise ConfigError(f"malformed --eps list: {args.eps!r}") from None
    if len(eps) < 3:
        raise ConfigError("--eps needs at least 3 values")
    if len(set(eps)) != len(eps):
        raise ConfigError("--eps values must be distinct")
    try:
        rows = [(e, cavity.free_casimir_density(e)) for e in eps]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    limit = cavity.casimir_limit(eps)
    out = OutputTable(["epsilon", "density"])
    out.comments += [
        "free 1D Casimir density with exponential mode cutoff, units hbar c / L0^2",
        f"extrapolated = {format_number(limit.value)}",
        f"extrapolation_residual = {format_number(limit.residual)}",
        f"exact = {format_number(cavity.CASIMIR_EXACT)}",
        f"unit_SI_J_per_m = {format_number(cavity.casimir_unit_si(cfg.cavity.L0, cfg.constants))}",
    ]
    out.rows = rows
    return out


def _dispatch(args, cfg: RunConfig, sink: BinaryIO, caught: list[str]) -> None:
    if args.command == "boundary":
        write_csv(_boundary(cfg, args), sink)
    elif args.command == "point-source":
        if args.action == "check":
            write_report(_point_source_check(cfg), sink)
        else:
            write_csv(_point_source(cfg, args), sink)
    elif args.command == "cavity":
        if args.action == "density":
            write_csv(_cavity_density(cfg, args, caught), sink)
        elif args.action == "averaged":
            write_csv(_cavity_averaged(cfg, args, caught), sink)
        elif args.action == "casimir":
            write_csv(_cavity_casimir(cfg, args), sink)
        else:
            raise UsageError("cavity needs one of: density, averaged, casimir")
    else:
        raise UsageError("missing subcommand")


def run(argv: Sequence[str] | None = None, stdout: BinaryIO | None = None,
        stderr=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stderr = sys.stderr if stderr is None else stderr
    first = next((a for a in argv if not a.startswith("-")), None)
    if first is not None and first not in SUBCOMMANDS:
        print(f"vacdens: error: unknown subcommand {first!r} "
              f"(expected one of {', '.join(SUBCOMMANDS)})", file=stderr)
        return EXIT_CONFIG
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        if args.command == "cavity" and args.action is None:
            raise UsageError("cavity needs one of: density, averaged, casimir")
        cfg = _load_config(args)
        if args.workers < 0:
            raise ConfigError("--workers must be >= 0")
    except (UsageError, ConfigError) as exc:
        print(f"vacdens: error: {exc}", file=stderr)
        return EXIT_CONFIG

    caught: list[str] = []
    buffer = io.BytesIO()
    try:
        _dispatch(args, cfg, buffer, caught)
    except (UsageError, ConfigError) as exc:
        print(f"vacdens: error: {exc}", file=stderr)
        return EXIT_CONFIG
    except (QuadratureError, cavity.ResourceError, ArithmeticError) as exc:
        print(f"vacdens: numerical failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    for msg in caught:
        print(f"vacdens: warning: {msg}", file=stderr)

    try:
        if args.out:
            with open(args.out, "wb") as fh:
                fh.write(buffer.getvalue())
        else:
            sink = stdout if stdout is not None else sys.stdout.buffer
            sink.write(buffer.getvalue())
            sink.flush()
    except OSError as exc:
        print(f"vacdens: I/O failure: {exc}", file=stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
