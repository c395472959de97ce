"""Command-line front end.

Every subcommand resolves its parameters, runs the corresponding library
computation and only then writes a single deterministic table (CSV or JSON)
to --out or stdout.  Exit codes: 0 success, 2 usage or parse error, 3
numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .entropy import nernst_verdict
from .errors import ConvergenceError, DomainError, ExtrapolationError, PrescriptionError
from .fileio import (
    FileFormatError,
    load_gamma_map,
    load_geometry_pair,
    load_optical_table,
    load_residual_bound,
    parse_extrapolation,
    render_entropy_scan,
    render_table,
)
from .geometry import GeometryCase, exact_cylinder_force, pft_force
from .lifshitz import EvaluationConfig, free_energy
from .materials import eps_from_table
from .presets import build_model, si_static_table
from .yukawa import exclusion_bound
from .constants import angular_frequency_to_ev, ev_to_angular_frequency

_MODEL_KINDS = ("ideal", "drude", "plasma", "impedance-ir", "impedance-skin", "table")


def _add_model_arguments(parser):
    parser.add_argument("--model", choices=_MODEL_KINDS, default="drude",
                        help="material prescription (default: drude)")
    parser.add_argument("--preset", default="Au-paper",
                        help="parameter preset: Au-paper, Au-resistivity or Si-static")
    parser.add_argument("--table-file", default=None,
                        help="optical table file (omega_eV, Im_eps) for --model table")
    parser.add_argument("--extrapolation", default=None,
                        help="low-frequency rule for --table-file: "
                             "drude:WP_EV:GAMMA_EV, constant:EPS0 or none")
    parser.add_argument("--omega-p-ev", type=float, default=None,
                        help="override the preset plasma frequency, eV")
    parser.add_argument("--gamma-ev", type=float, default=None,
                        help="override the preset relaxation parameter, eV")


def _add_output_arguments(parser, tol=True):
    if tol:
        parser.add_argument("--tol", type=float, default=1e-7,
                            help="relative tolerance of the evaluation (default 1e-7)")
    parser.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    parser.add_argument("--out", default=None, help="output file (default: stdout)")


def _resolve_model(args):
    table = None
    if args.table_file is not None:
        table = load_optical_table(args.table_file, parse_extrapolation(args.extrapolation))
        return build_model("table", table=table)
    return build_model(
        args.model, preset=args.preset,
        omega_p_ev=args.omega_p_ev, gamma_ev=args.gamma_ev,
    )


def _model_config(args):
    return {
        "model": "table" if args.table_file is not None else args.model,
        "preset": args.preset,
        "table_file": args.table_file or "",
        "extrapolation": args.extrapolation or "",
        "omega_p_ev": args.omega_p_ev,
        "gamma_ev": args.gamma_ev,
    }


def _z_grid(args):
    if args.points < 1:
        raise DomainError("grid needs at least one point")
    if not (0.0 < args.z_min_um <= args.z_max_um):
        raise DomainError("need 0 < z-min-um <= z-max-um")
    if args.points == 1 and args.z_min_um != args.z_max_um:
        raise DomainError("a single-point grid needs z-min-um == z-max-um")
    return np.geomspace(args.z_min_um * 1e-6, args.z_max_um * 1e-6, args.points)


_LIFSHITZ_UNITS = {
    "z_m": "m",
    "free_energy_J_per_m2": "J/m^2",
    "pressure_Pa": "Pa",
    "terms_used": "1",
    "zero_frequency_share": "1",
    "error_estimate": "relative",
}


def _run_lifshitz_table(args, include_pressure):
    model = _resolve_model(args)
    config = EvaluationConfig(rel_tolerance=args.tol)
    grid = _z_grid(args)
    results = [free_energy(float(z), args.temperature, model, config) for z in grid]
    if include_pressure:
        columns = ("z_m", "free_energy_J_per_m2", "pressure_Pa", "terms_used",
                   "zero_frequency_share", "error_estimate")
        rows = [
            (r.z, r.free_energy_per_area, r.pressure, r.terms_used,
             r.zero_frequency_share, r.quadrature_error_estimate)
            for r in results
        ]
    else:
        columns = ("z_m", "free_energy_J_per_m2", "terms_used",
                   "zero_frequency_share", "error_estimate")
        rows = [
            (r.z, r.free_energy_per_area, r.terms_used,
             r.zero_frequency_share, r.quadrature_error_estimate)
            for r in results
        ]
    run_config = {
        "command": "pressure" if include_pressure else "free-energy",
        "z_min_um": args.z_min_um,
        "z_max_um": args.z_max_um,
        "points": args.points,
        "temperature_K": args.temperature,
        "tol": args.tol,
        **_model_config(args),
    }
    return render_table(run_config["command"], run_config, columns, _LIFSHITZ_UNITS, rows, args.fmt)


def cmd_pressure(args):
    return _run_lifshitz_table(args, include_pressure=True)


def cmd_free_energy(args):
    return _run_lifshitz_table(args, include_pressure=False)


def _parse_gamma_map(spec):
    if spec is None:
        return None, None
    if spec == "perfect-lattice":
        return "perfect-lattice", 0.0
    if spec == "residual":
        return "residual", 0.1
    if spec.startswith("residual:"):
        try:
            fraction = float(spec.split(":", 1)[1])
        except ValueError:
            raise FileFormatError(f"bad residual fraction in {spec!r}") from None
        if not (0.0 < fraction <= 1.0):
            raise DomainError("residual fraction must lie in (0, 1]")
        return "residual", fraction
    if Path(spec).exists():
        return load_gamma_map(spec), 0.0
    raise FileFormatError(
        f"gamma map {spec!r} is neither 'perfect-lattice', 'residual[:FRACTION]' "
        "nor an existing file"
    )


def cmd_entropy(args):
    model = _resolve_model(args)
    gamma_map, fraction = _parse_gamma_map(args.gamma_map)
    config = EvaluationConfig(rel_tolerance=args.tol)
    scan = nernst_verdict(
        model, args.z_um * 1e-6, gamma_map,
        t_max=args.t_max, t_min=args.t_min, points=args.points,
        residual_fraction=fraction or 0.1, config=config,
    )
    run_config = {
        "command": "entropy",
        "z_um": args.z_um,
        "t_max_K": args.t_max,
        "t_min_K": args.t_min,
        "points": args.points,
        "gamma_map": args.gamma_map or "",
        "tol": args.tol,
        **_model_config(args),
    }
    return render_entropy_scan(scan, run_config, args.fmt)


_PFT_UNITS = {
    "kind": "",
    "z_m": "m",
    "R_m": "m",
    "pft_value": "N/m (cylinder) or N (sphere)",
    "exact_value": "N/m",
    "rel_error_vs_pft": "relative",
    "validity_flag": "",
}


def cmd_pft(args):
    case = GeometryCase(f"{args.kind}-plate", args.z_um * 1e-6, args.R_um * 1e-6)
    pft_value = pft_force(case)
    flag = "ok" if case.asymptotics_reliable else "z/R-exceeds-0.1"
    notes = []
    if args.kind == "cylinder":
        exact = exact_cylinder_force(case.z, case.radius)
        rel_error = abs(exact - pft_value) / abs(pft_value)
        row = (args.kind, case.z, case.radius, pft_value, exact, rel_error, flag)
    else:
        notes.append(
            "exact electromagnetic sphere-plate value not available; "
            "proximity-force result only, conservative |error| <= z/R"
        )
        row = (args.kind, case.z, case.radius, pft_value, None, None, flag)
    run_config = {
        "command": "pft",
        "kind": args.kind,
        "z_um": args.z_um,
        "R_um": args.R_um,
    }
    columns = ("kind", "z_m", "R_m", "pft_value", "exact_value",
               "rel_error_vs_pft", "validity_flag")
    text = render_table("pft", run_config, columns, _PFT_UNITS, [row], args.fmt, notes)
    if notes:
        print(f"note: {notes[0]}", file=sys.stderr)
    return text


def cmd_yukawa(args):
    bound = load_residual_bound(args.bound_file)
    geometry = load_geometry_pair(args.geometry_file)
    if args.points < 1:
        raise DomainError("lambda grid needs at least one point")
    if not (0.0 < args.lambda_min_um <= args.lambda_max_um):
        raise DomainError("need 0 < lambda-min-um <= lambda-max-um")
    lambdas = np.geomspace(args.lambda_min_um * 1e-6, args.lambda_max_um * 1e-6, args.points)
    curve = exclusion_bound(
        bound, geometry, lambdas,
        provenance=f"bound={Path(args.bound_file).name} geometry={Path(args.geometry_file).name}",
    )
    run_config = {
        "command": "yukawa",
        "bound_file": Path(args.bound_file).name,
        "geometry_file": Path(args.geometry_file).name,
        "lambda_min_um": args.lambda_min_um,
        "lambda_max_um": args.lambda_max_um,
        "points": args.points,
    }
    columns = ("lambda_m", "alpha_max")
    units = {"lambda_m": "m", "alpha_max": "1"}
    rows = list(zip(curve.lambdas, curve.alpha_max))
    return render_table("yukawa", run_config, columns, units, rows, args.fmt,
                        notes=(curve.provenance,))


def cmd_optics_convert(args):
    if args.table_file is not None:
        table = load_optical_table(args.table_file, parse_extrapolation(args.extrapolation))
    elif args.preset.lower() == "si-static":
        table = si_static_table()
    else:
        raise DomainError("optics-convert needs --table-file or --preset Si-static")
    if args.points < 1:
        raise DomainError("frequency grid needs at least one point")
    if not (0.0 < args.xi_min_ev <= args.xi_max_ev):
        raise DomainError("need 0 < xi-min-ev <= xi-max-ev")
    xi = np.geomspace(
        ev_to_angular_frequency(args.xi_min_ev), ev_to_angular_frequency(args.xi_max_ev),
        args.points,
    )
    eps = np.atleast_1d(eps_from_table(xi, table))
    run_config = {
        "command": "optics-convert",
        "table_file": args.table_file or "",
        "preset": args.preset,
        "extrapolation": args.extrapolation or "",
        "xi_min_ev": args.xi_min_ev,
        "xi_max_ev": args.xi_max_ev,
        "points": args.points,
    }
    columns = ("xi_rad_per_s", "xi_ev", "eps_i_xi")
    units = {"xi_rad_per_s": "rad/s", "xi_ev": "eV", "eps_i_xi": "1"}
    rows = [(x, angular_frequency_to_ev(x), e) for x, e in zip(xi, eps)]
    return render_table("optics-convert", run_config, columns, units, rows, args.fmt,
                        notes=(table.provenance,))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="thermal-casimir",
        description="Thermal Casimir free energies, proximity-force checks, "
                    "Nernst diagnostics and Yukawa exclusion bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pressure", help="free energy and pressure over a separation grid")
    p.add_argument("--z-min-um", type=float, required=True)
    p.add_argument("--z-max-um", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--temperature", "-T", type=float, default=300.0)
    _add_model_arguments(p)
    _add_output_arguments(p)
    p.set_defaults(handler=cmd_pressure)

    p = sub.add_parser("free-energy", help="free energy over a separation grid")
    p.add_argument("--z-min-um", type=float, required=True)
    p.add_argument("--z-max-um", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--temperature", "-T", type=float, default=300.0)
    _add_model_arguments(p)
    _add_output_arguments(p)
    p.set_defaults(handler=cmd_free_energy)

    p = sub.add_parser("entropy", help="entropy scan toward T = 0 with a Nernst verdict")
    p.add_argument("--z-um", type=float, required=True)
    p.add_argument("--t-max", type=float, default=300.0)
    p.add_argument("--t-min", type=float, default=1.0)
    p.add_argument("--points", type=int, default=25)
    p.add_argument("--gamma-map", default=None,
                   help="perfect-lattice, residual[:FRACTION] or a (T_K, gamma_eV) file")
    _add_model_arguments(p)
    _add_output_arguments(p)
    p.set_defaults(handler=cmd_entropy, tol=1e-9)

    p = sub.add_parser("pft", help="proximity-force results for curved geometries")
    p.add_argument("--kind", choices=("cylinder", "sphere"), required=True)
    p.add_argument("--z-um", type=float, required=True)
    p.add_argument("--R-um", type=float, required=True)
    _add_output_arguments(p, tol=False)
    p.set_defaults(handler=cmd_pft)

    p = sub.add_parser("yukawa", help="exclusion curve from a residual pressure bound")
    p.add_argument("--bound-file", required=True, help="CSV: z_nm, Delta_tot_mPa")
    p.add_argument("--geometry-file", required=True, help="JSON body pair")
    p.add_argument("--lambda-min-um", type=float, required=True)
    p.add_argument("--lambda-max-um", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    _add_output_arguments(p, tol=False)
    p.set_defaults(handler=cmd_yukawa)

    p = sub.add_parser("optics-convert", help="tabulated absorption to eps(i*xi)")
    p.add_argument("--table-file", default=None)
    p.add_argument("--extrapolation", default=None)
    p.add_argument("--preset", default="")
    p.add_argument("--xi-min-ev", type=float, required=True)
    p.add_argument("--xi-max-ev", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    _add_output_arguments(p, tol=False)
    p.set_defaults(handler=cmd_optics_convert)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        tol = getattr(args, "tol", None)
        if tol is not None:
            EvaluationConfig(rel_tolerance=tol)  # validate early
        text = args.handler(args)
    except (FileFormatError, DomainError, ExtrapolationError, PrescriptionError,
            FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    if args.out is not None:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def entry_point():
    raise SystemExit(main())


if __name__ == "__main__":
    entry_point()
