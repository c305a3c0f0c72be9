"""Command-line interface: ``trapped-fermi <command> [options]``.

Commands
--------
coeffs          partition / density-of-states coefficients and cubic classification
point           one solved state (fugacity, energy, specific heat)
sweep           a temperature sweep as CSV or JSON
fig1            specific heat vs T/T_F0 for two particle numbers
fermi-temp      Fermi energy and Fermi temperatures
oracle-compare  continuum formulas against brute-force level sums

Options may also come from a flat ``key = value`` file given by ``--config``
or the ``TRAPPED_FERMI_CONFIG`` environment variable; command-line flags
override file values.  Exit codes: 0 success, 2 invalid input,
3 numerical failure.
"""

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .degenerate_limit import classify_cubic, fermi_energy
from .errors import (DomainError, InvalidInputError, NumericalError, ResourceError,
                     TrappedFermiError)
from .exact_oracle import (discrete_internal_energy, discrete_solve_mu,
                           discrete_specific_heat)
from .finite_temperature import (Z_F_CONVENTION, SweepTable, fermi_temperature,
                                 format_metadata, format_value,
                                 infinite_n_fermi_temperature, sweep_temperature,
                                 thermo_point)
from .trap_model import (TrapSpec, ZeroPointMode, compute_dos_coefficients,
                         compute_partition_coefficients)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

CONFIG_ENV = "TRAPPED_FERMI_CONFIG"
ORACLE_MAX_N = 1e6
FIG1_OMEGA = "500,600,800"
_HELP = argparse.ArgumentDefaultsHelpFormatter


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _omega(text):
    try:
        parts = [float(p) for p in str(text).split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three frequencies, got {len(parts)}")
    return tuple(parts)


def _count(text):
    value = float(text)
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def _float_list(text):
    try:
        return [float(p) for p in str(text).split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _bool(text):
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def load_config(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected key = value", EXIT_INVALID)
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def _common(parser, omega_default="1,1,1"):
    parser.add_argument("--omega", type=_omega, default=omega_default,
                        help="trap frequencies wx,wy,wz")
    parser.add_argument("--mode", choices=[m.value for m in ZeroPointMode], default="relative",
                        help="energy origin")
    parser.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    parser.add_argument("--output", default=None, help="output file (stdout when unset)")
    parser.add_argument("--nprime-literal", dest="nprime_literal", action="store_true",
                        default=False, help="square eps0 in the b2 term of N' (comparison runs)")
    parser.add_argument("--report-approx-root", dest="report_approx_root", type=_bool,
                        default=True, help="include the closed-form approximate Fermi energy")
    parser.add_argument("--report-threshold", dest="report_threshold", type=_bool,
                        default=True, help="include the closed-form three-root thresholds")
    parser.add_argument("--report-c-paper22", dest="report_c_paper22", type=_bool,
                        default=True, help="fill the c_paper22 column (empty when off)")


def _grid_options(parser, t_min, t_max, points, scale, relative):
    parser.add_argument("--t-min", dest="t_min", type=float, default=t_min, help="grid start")
    parser.add_argument("--t-max", dest="t_max", type=float, default=t_max, help="grid end")
    parser.add_argument("--t-points", "--points", dest="t_points", type=int, default=points,
                        help="number of grid points")
    parser.add_argument("--t-scale", dest="t_scale", choices=("linear", "log"), default=scale,
                        help="grid spacing")
    parser.add_argument("--t-relative", dest="t_relative", type=_bool, default=relative,
                        help="grid values are T/T_F0 rather than absolute temperatures")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="trapped-fermi",
        description="Thermodynamics of N spin-polarized fermions in a 3D harmonic trap.",
        epilog=f"Config file: --config PATH or ${CONFIG_ENV}; flags override file values.")
    parser.add_argument("--config", default=None, help="flat key = value defaults file")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="expansion and density-of-states coefficients",
                       formatter_class=_HELP)
    _common(p)
    p.add_argument("--n", type=_count, default=None, help="evaluate the discriminant at N")

    p = sub.add_parser("point", help="one solved thermodynamic state",
                       formatter_class=_HELP)
    _common(p)
    p.add_argument("--n", type=_count, default=1000.0, help="particle number")
    p.add_argument("--t", type=float, default=None, help="temperature (required)")

    p = sub.add_parser("sweep", help="temperature sweep",
                       formatter_class=_HELP)
    _common(p)
    p.add_argument("--n", type=_count, default=1000.0, help="particle number")
    _grid_options(p, 0.02, 20.0, 200, "log", True)

    p = sub.add_parser("fig1", help="specific heat curves for two particle numbers",
                       formatter_class=_HELP,
                       description="Writes one table per particle number and fig1_compare.csv "
                                   "into the --output directory (default: current directory).")
    _common(p, omega_default=FIG1_OMEGA)
    p.add_argument("--n-small", dest="n_small", type=_count, default=1e8,
                   help="finite particle number")
    p.add_argument("--n-large", dest="n_large", type=_count, default=1e23,
                   help="reference particle number")
    _grid_options(p, 0.02, 20.0, 200, "log", True)

    p = sub.add_parser("fermi-temp", help="Fermi energy and Fermi temperatures",
                       formatter_class=_HELP)
    _common(p)
    p.add_argument("--n", type=_count, default=1000.0, help="particle number")

    p = sub.add_parser("oracle-compare", help="continuum vs discrete-spectrum sums",
                       formatter_class=_HELP)
    _common(p)
    p.add_argument("--n", type=_count, default=455.0, help="particle number (at most 1e6)")
    p.add_argument("--t", type=_float_list, default="5,10,20",
                   help="comma-separated temperatures")
    return parser


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(argv)
    path = known.config or os.environ.get(CONFIG_ENV)
    if not path:
        return
    try:
        values = load_config(path)
    except OSError as exc:
        raise CliError(f"cannot read config file {path}: {exc}", EXIT_INVALID)
    for action in parser._subparsers._group_actions:
        for subparser in action.choices.values():
            dests = {a.dest: a for a in subparser._actions}
            defaults = {}
            for key, value in values.items():
                if key not in dests:
                    continue
                a = dests[key]
                # string defaults pass through ``type``; flags need explicit parsing
                defaults[key] = _bool(value) if a.type is None and a.nargs == 0 else value
            subparser.set_defaults(**defaults)


def _trap(args):
    wx, wy, wz = args.omega
    return TrapSpec(wx, wy, wz, ZeroPointMode(args.mode))


def _check_n(N):
    if not N >= 1.0:
        raise InvalidInputError(f"N must be >= 1, got {N!r}")
    return N


def _grid(args, coeffs, N):
    count = args.t_points
    if count < 1:
        raise InvalidInputError("--t-points must be >= 1")
    lo, hi = args.t_min, args.t_max
    if not (lo > 0.0 and math.isfinite(lo) and math.isfinite(hi)):
        raise InvalidInputError("--t-min must be > 0 and both bounds finite")
    if count == 1:
        grid = np.array([lo])
    else:
        if not lo < hi:
            raise InvalidInputError("--t-min must be below --t-max")
        grid = np.geomspace(lo, hi, count) if args.t_scale == "log" else np.linspace(lo, hi, count)
    if args.t_relative:
        grid = grid * infinite_n_fermi_temperature(coeffs, N)
    return grid


def _base_metadata(trap):
    return {"tool": f"trapped_fermi {__version__}", "omega": list(trap.frequencies),
            "mode": trap.zero_point_mode.value}


def _report_text(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=2, default=_json_default) + "\n"
    lines = ["key,value"]
    for key, value in report.items():
        text = format_metadata(value) if isinstance(value, (list, tuple)) else format_value(value)
        lines.append(f"{key},{text}")
    return "\n".join(lines) + "\n"


def _json_default(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    raise TypeError(f"not serializable: {value!r}")


def _emit(text, output, stdout):
    if output:
        Path(output).write_text(text)
    else:
        stdout.write(text)


def _relative_coeffs(trap):
    return compute_dos_coefficients(trap.with_mode(ZeroPointMode.RELATIVE))


def cmd_coeffs(args, stdout):
    trap = _trap(args)
    a = compute_partition_coefficients(trap)
    b = compute_dos_coefficients(trap)
    N = None if args.n is None else _check_n(args.n)
    cls = classify_cubic(b, N, nprime_literal=args.nprime_literal)
    report = {
        **_base_metadata(trap),
        "a2": a.a2, "a1": a.a1, "a0": a.a0, "a_minus1": a.a_minus1,
        "b2": b.b2, "b1": b.b1, "b0": b.b0, "eps0": b.eps0,
        "p": cls.p, "q0": cls.q0,
    }
    if args.report_threshold:
        report.update({"N_max_paper": cls.N_max_paper, "N_max_b2": cls.N_max_b2,
                       "N_max_diagnostic_only": cls.N_max_diagnostic_only})
    report.update({
        "three_root_window": list(cls.three_root_window) if cls.three_root_window else None,
        "discriminant": cls.discriminant,
        "real_root_count": cls.real_root_count,
    })
    _emit(_report_text(report, args.format), args.output, stdout)
    return EXIT_OK


def _fermi_temperature_metadata(coeffs, N):
    try:
        ft = fermi_temperature(coeffs, N)
    except DomainError as exc:
        return {"T_F0": infinite_n_fermi_temperature(coeffs, N), "T_F": f"out of range: {exc}"}
    return {"T_F0": ft.T_F0, "T_F": ft.T_F, "T_F_over_T_F0": ft.ratio, "z_F": ft.z_F,
            "z_F convention": Z_F_CONVENTION}


def cmd_point(args, stdout):
    trap = _trap(args)
    coeffs = _relative_coeffs(trap)
    N = _check_n(args.n)
    if args.t is None:
        raise InvalidInputError("point needs --t")
    point = thermo_point(coeffs, N, args.t, paper22=args.report_c_paper22)
    meta = {**_base_metadata(trap), "N": N, **_fermi_temperature_metadata(coeffs, N)}
    table = SweepTable([point], meta)
    _emit(table.to_json() if args.format == "json" else table.to_csv(), args.output, stdout)
    return EXIT_OK


def cmd_sweep(args, stdout):
    trap = _trap(args)
    coeffs = _relative_coeffs(trap)
    N = _check_n(args.n)
    table = sweep_temperature(coeffs, N, _grid(args, coeffs, N),
                              metadata={"tool": f"trapped_fermi {__version__}"},
                              paper22=args.report_c_paper22)
    _emit(table.to_json() if args.format == "json" else table.to_csv(), args.output, stdout)
    if len(table.failures) == len(table):
        return EXIT_NUMERICAL
    return EXIT_OK


def _tag(N):
    return f"N{format(N, '.0e').replace('+', '')}"


def enhancement_check(small: SweepTable, large: SweepTable):
    """Pointwise comparison c(N_small) >= c(N_large) on a shared T/T_F0 grid."""
    c_s = small.column("c_exact")
    c_l = large.column("c_exact")
    t = small.column("T_over_TF0")
    diff = c_s - c_l
    ok = diff >= 0.0
    below = t < 1.0
    strict_below = np.count_nonzero(diff[below] > 0.0)
    n_below = int(np.count_nonzero(below))
    if np.all(diff == 0.0):
        verdict = "tie"
    elif np.all(ok) and strict_below >= 0.9 * n_below:
        verdict = "pass"
    else:
        verdict = "fail"
    return {"verdict": verdict, "points": int(diff.size),
            "points_ge": int(np.count_nonzero(ok)),
            "points_below_TF0": n_below, "strict_below_TF0": int(strict_below),
            "diff": diff, "t": t, "c_small": c_s, "c_large": c_l}


def cmd_fig1(args, stdout):
    trap = _trap(args)
    coeffs = _relative_coeffs(trap)
    n_small, n_large = _check_n(args.n_small), _check_n(args.n_large)
    out_dir = Path(args.output or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    tables = []
    for N in (n_small, n_large):
        table = sweep_temperature(coeffs, N, _grid(args, coeffs, N),
                                  metadata={"tool": f"trapped_fermi {__version__}"},
                                  paper22=args.report_c_paper22)
        if len(table.failures) == len(table):
            raise NumericalError(f"every point of the N = {N:g} sweep failed")
        tables.append(table)
        name = f"fig1_{_tag(N)}.{args.format}"
        (out_dir / name).write_text(table.to_json() if args.format == "json" else table.to_csv())

    check = enhancement_check(*tables)
    lines = [f"# tool = trapped_fermi {__version__}",
             f"# omega = {format_metadata(list(trap.frequencies))}",
             f"# N_small = {format_value(n_small)}", f"# N_large = {format_value(n_large)}",
             f"# enhancement check = {check['verdict']}",
             "T_over_TF0,c_exact_small,c_exact_large,difference,enhanced"]
    for t, cs, cl, d in zip(check["t"], check["c_small"], check["c_large"], check["diff"]):
        lines.append(",".join([format_value(t), format_value(cs), format_value(cl),
                               format_value(d), format_value(bool(d >= 0.0))]))
    (out_dir / "fig1_compare.csv").write_text("\n".join(lines) + "\n")
    stdout.write(
        f"enhancement check: {check['verdict']} "
        f"({check['points_ge']}/{check['points']} points with c(N_small) >= c(N_large); "
        f"{check['strict_below_TF0']}/{check['points_below_TF0']} strictly greater below T_F0)\n")
    return EXIT_OK


def cmd_fermi_temp(args, stdout):
    trap = _trap(args)
    N = _check_n(args.n)
    coeffs = compute_dos_coefficients(trap)
    ef = fermi_energy(coeffs, N, nprime_literal=args.nprime_literal)
    report = {**_base_metadata(trap), "N": N, "E_F": ef.E_F,
              "E_F_asymptotic": ef.E_F_asymptotic, "N_prime": ef.N_prime,
              "residual": ef.residual}
    if args.report_approx_root:
        report.update({"E_F_paper_approx": ef.E_F_paper_approx,
                       "residual_paper_approx": ef.residual_paper_approx})
    report.update(_fermi_temperature_metadata(_relative_coeffs(trap), N))
    _emit(_report_text(report, args.format), args.output, stdout)
    return EXIT_OK


ORACLE_COLUMNS = ("T", "mu_continuum", "mu_discrete", "mu_rel_diff", "U_continuum",
                  "U_discrete", "U_rel_diff", "c_continuum", "c_discrete", "c_rel_diff",
                  "expansion_valid")


def oracle_compare_rows(trap, N, temperatures):
    coeffs = _relative_coeffs(trap)
    rel = trap.with_mode(ZeroPointMode.RELATIVE)
    rows = []
    for T in temperatures:
        p = thermo_point(coeffs, N, T)
        mu_d = discrete_solve_mu(rel, N, T)
        U_d = discrete_internal_energy(rel, mu_d, T)
        c_d = discrete_specific_heat(rel, N, T)
        rows.append({
            "T": T, "mu_continuum": p.mu, "mu_discrete": mu_d,
            "mu_rel_diff": abs(p.mu - mu_d) / abs(mu_d) if mu_d != 0.0 else math.inf,
            "U_continuum": p.U, "U_discrete": U_d, "U_rel_diff": abs(p.U - U_d) / abs(U_d),
            "c_continuum": p.c_exact, "c_discrete": c_d,
            "c_rel_diff": abs(p.c_exact - c_d) / abs(c_d),
            "expansion_valid": p.expansion_valid,
        })
    return rows


def cmd_oracle_compare(args, stdout):
    trap = _trap(args)
    N = _check_n(args.n)
    if N > ORACLE_MAX_N:
        raise InvalidInputError(f"N = {N:g} exceeds the oracle guard N <= {ORACLE_MAX_N:g}")
    temperatures = args.t if isinstance(args.t, list) else _float_list(args.t)
    if not temperatures or any(not (T > 0.0) for T in temperatures):
        raise InvalidInputError("--t needs positive temperatures")
    rows = oracle_compare_rows(trap, N, temperatures)
    if args.format == "json":
        text = json.dumps({"metadata": {**_base_metadata(trap), "N": N}, "rows": rows},
                          indent=2) + "\n"
    else:
        lines = [f"# tool = trapped_fermi {__version__}",
                 f"# omega = {format_metadata(list(trap.frequencies))}",
                 f"# N = {format_value(N)}", ",".join(ORACLE_COLUMNS)]
        for r in rows:
            lines.append(",".join(format_value(r[c]) for c in ORACLE_COLUMNS))
        text = "\n".join(lines) + "\n"
    _emit(text, args.output, stdout)
    return EXIT_OK


COMMANDS = {
    "coeffs": cmd_coeffs,
    "point": cmd_point,
    "sweep": cmd_sweep,
    "fig1": cmd_fig1,
    "fermi-temp": cmd_fermi_temp,
    "oracle-compare": cmd_oracle_compare,
}


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except CliError as exc:
        stderr.write(f"trapped-fermi: {exc}\n")
        return exc.code
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, stdout)
    except (InvalidInputError, DomainError) as exc:
        stderr.write(f"trapped-fermi: invalid input: {exc}\n")
        return EXIT_INVALID
    except (NumericalError, ResourceError) as exc:
        stderr.write(f"trapped-fermi: numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except TrappedFermiError as exc:
        stderr.write(f"trapped-fermi: {exc}\n")
        return EXIT_NUMERICAL
    except OSError as exc:
        stderr.write(f"trapped-fermi: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
