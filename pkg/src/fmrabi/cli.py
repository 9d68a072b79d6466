"""Command-line front end: one subcommand per reproducible artifact.

All frequencies are entered in units of the cavity frequency (omega_c = 1),
so the usual dimensionless working points can be typed directly, e.g.

    fmrabi params --v 0.33 --xi 1.0
    fmrabi sweep --v 0.33 --xi-max 3 --out sweep_v033.csv
    fmrabi fidelity --frame second --v 0.33 --xi 2.48 --out fid.csv
    fmrabi phase-diagram --v 0.33 --out phase_v033
    fmrabi ladder --v 0.49 --out ladder_v049.csv
    fmrabi spectrum --out spectrum.csv

Every CSV starts with a '# key = value' metadata preamble (effective
parameters, time-scale ratios, tool version) followed by a header row; floats
are formatted to 12 significant digits so identical configs give byte-identical
files.  A config file of 'key = value' lines may seed any flag; explicit flags
win.  Exit codes: 0 success, 2 bad configuration, 3 convergence-guard failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .dynamics import (
    GUARD_TOL,
    MAX_REFINEMENTS,
    HamiltonianSpec,
    StepTooLarge,
    fidelity_trace,
    modulation_window,
    rabi_window,
)
from .dynamics import FidelityTrace
from .fockspace import FockSpace, coherent_state, cutoff_convergence, product_state
from .model import ModelParams, classify_regime
from .modulation import M0Zero, bessel_j, effective_params, rwa_report, zero_point
from .phases import diagram, phase_label_name, photon_ladder
from .spectrum import analytic_spectrum, jc_eigenenergy

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3


class ConfigError(ValueError):
    pass


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    return format(float(x), ".12g")


def load_config(path: str) -> dict[str, str]:
    """Parse a flat 'key = value' file; '#' starts a comment."""
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key or not value:
                raise ConfigError(f"{path}:{lineno}: empty key or value")
            values[key.replace("-", "_")] = value
    return values


def _params_from_args(args) -> ModelParams:
    omega0 = 1.0 + args.delta
    try:
        return ModelParams(omega0=omega0, omega_c=1.0, g=args.g, xi=args.xi, v=args.v)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _metadata(command: str, p: ModelParams, args) -> list[tuple[str, str]]:
    eff = effective_params(p)
    rwa = rwa_report(p, threshold=args.threshold)
    regime = classify_regime(p)
    items = [
        ("tool", "fmrabi"),
        ("version", __version__),
        ("command", command),
        ("omega_c", _fmt(1.0)),
        ("omega0", _fmt(p.omega0)),
        ("delta", _fmt(p.delta)),
        ("g", _fmt(p.g)),
        ("xi", _fmt(p.xi)),
        ("v", _fmt(p.v)),
        ("regime", regime.label),
        ("g_over_omega_c", _fmt(regime.ratio)),
        ("m0", _fmt(eff.m0)),
        ("delta_m0", _fmt(eff.delta_m0)),
        ("g_r", _fmt(eff.g_r)),
        ("g_c", _fmt(eff.g_c)),
        ("omega0_eff", _fmt(eff.omega0_eff)),
        ("omega_c_eff", _fmt(eff.omega_c_eff)),
        ("delta_eff", _fmt(eff.delta_eff)),
        ("rwa_threshold", _fmt(rwa.threshold)),
        ("rwa_v_over_abs_delta", _fmt(rwa.v_over_abs_delta)),
        ("rwa_v_over_abs_delta_m0", _fmt(rwa.v_over_abs_delta_m0)),
        ("rwa_v_over_g", _fmt(rwa.v_over_g)),
        ("rwa_abs_gc_over_abs_delta_m0", _fmt(rwa.abs_gc_over_abs_delta_m0)),
        ("rwa_first_frame_ok", _fmt(rwa.first_frame_ok)),
        ("rwa_jc_ok", _fmt(rwa.jc_ok)),
    ]
    try:
        items.append(("zero_point_v", _fmt(zero_point(p))))
    except M0Zero:
        items.append(("zero_point_v", "undefined"))
    return items


def _write_csv(path: str, metadata: list[tuple[str, str]], header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        for key, value in metadata:
            fh.write(f"# {key} = {value}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(cell if isinstance(cell, str) else _fmt(cell) for cell in row))
            fh.write("\n")


def read_csv(path: str) -> tuple[dict[str, str], list[str], list[list[str]]]:
    """Round-trip reader for the CSV format written by this tool."""
    meta: dict[str, str] = {}
    header: list[str] = []
    rows: list[list[str]] = []
    with open(path) as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if line.startswith("#"):
                key, _, value = line[1:].partition("=")
                meta[key.strip()] = value.strip()
            elif not header:
                header = line.split(",")
            elif line:
                rows.append(line.split(","))
    return meta, header, rows


def cmd_params(args) -> int:
    p = _params_from_args(args)
    eff = effective_params(p)
    rwa = rwa_report(p, threshold=args.threshold)
    regime = classify_regime(p)
    try:
        zp = zero_point(p)
    except M0Zero:
        zp = None
    report = {
        "tool": "fmrabi",
        "version": __version__,
        "command": "params",
        "model": {
            "omega0": p.omega0,
            "omega_c": 1.0,
            "delta": p.delta,
            "g": p.g,
            "xi": p.xi,
            "v": p.v,
        },
        "regime": {"label": regime.label, "g_over_omega_c": regime.ratio},
        "effective": {
            "m0": eff.m0,
            "delta_m0": eff.delta_m0,
            "g_r": eff.g_r,
            "g_c": eff.g_c,
            "omega0_eff": eff.omega0_eff,
            "omega_c_eff": eff.omega_c_eff,
            "delta_eff": eff.delta_eff,
            "g_r_over_omega_c_eff": _ratio(eff.g_r, eff.omega_c_eff),
            "g_r_over_omega0_eff": _ratio(eff.g_r, eff.omega0_eff),
            "abs_g_c_over_delta_m0": _ratio(abs(eff.g_c), eff.delta_m0),
        },
        "rwa": {
            "threshold": rwa.threshold,
            "jc_threshold": rwa.jc_threshold,
            "v_over_abs_delta": rwa.v_over_abs_delta,
            "v_over_abs_delta_m0": rwa.v_over_abs_delta_m0,
            "v_over_g": rwa.v_over_g,
            "abs_gc_over_abs_delta_m0": rwa.abs_gc_over_abs_delta_m0,
            "pass_delta": rwa.pass_delta,
            "pass_delta_m0": rwa.pass_delta_m0,
            "pass_g": rwa.pass_g,
            "pass_jc": rwa.pass_jc,
        },
        "zero_point_v": zp,
    }
    text = json.dumps(report, indent=2, allow_nan=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def _ratio(num: float, den: float) -> float:
    return num / den if den != 0.0 else math.inf


def cmd_sweep(args) -> int:
    p = _params_from_args(args)
    eff0 = effective_params(p)
    xis = np.linspace(args.xi_min, args.xi_max, args.xi_points)
    rows = []
    for x in xis:
        g_r = p.g * bessel_j(0, float(x))
        g_c = p.g * bessel_j(eff0.m0, float(x))
        rows.append(
            (
                x,
                _ratio(g_r, eff0.omega_c_eff),
                _ratio(g_r, eff0.omega0_eff),
                _ratio(abs(g_c), eff0.delta_m0),
            )
        )
    _write_csv(
        args.out,
        _metadata("sweep", p, args),
        ["xi", "g_r_over_omega_c_eff", "g_r_over_omega0_eff", "abs_g_c_over_delta_m0"],
        rows,
    )
    return EXIT_OK


def cmd_fidelity(args) -> int:
    p = _params_from_args(args)
    eff = effective_params(p)
    if args.window is not None:
        t_grid = np.linspace(0.0, args.window, args.samples)
    elif args.frame == "first":
        # first-frame deviations dip once per modulation period (micromotion of
        # the dropped sidebands) and also drift secularly; the per-period dip is
        # the reported figure, overridable through --window
        t_grid = modulation_window(p, args.samples)
    else:
        t_grid = rabi_window(eff, args.samples)

    def run(n_max: int) -> "FidelityTrace":
        space = FockSpace(n_max)
        atom = np.array([1.0, 1.0]) / math.sqrt(2.0)
        psi0 = product_state(atom, coherent_state(args.alpha, space), space)
        if args.frame == "first":
            spec_a = HamiltonianSpec.rot_frame_exact(p, bessel_cutoff=args.bessel_cutoff)
            spec_b = HamiltonianSpec.eff_first_frame(p)
        else:
            spec_a = HamiltonianSpec.aniso_rabi(p)
            spec_b = HamiltonianSpec.eff_jc(p)
        return fidelity_trace(
            spec_a,
            spec_b,
            psi0,
            t_grid,
            step_factor=args.step_factor,
            guard_tol=args.guard_tol,
            max_refinements=args.max_refinements,
        )

    trace = run(args.n_max)
    cutoff_meta = []
    if args.check_cutoff:
        check = cutoff_convergence(lambda n: run(n).min_value, args.n_max)
        cutoff_meta = [
            ("cutoff_check_min_fidelity", _fmt(check.value_refined)),
            ("cutoff_check_shift", _fmt(check.shift)),
            ("cutoff_check_converged", _fmt(check.converged)),
        ]
    meta = _metadata("fidelity", p, args) + cutoff_meta + [
        ("frame", args.frame),
        ("alpha", _fmt(args.alpha)),
        ("n_max", _fmt(args.n_max)),
        ("window", _fmt(float(t_grid[-1]))),
        ("samples", _fmt(args.samples)),
        ("min_fidelity", _fmt(trace.min_value)),
        ("final_fidelity", _fmt(trace.final_value)),
        ("argmin_time", _fmt(trace.argmin_time)),
        ("window_note", "window is a tool choice (first frame: one modulation period;"
                        " second frame: one effective Rabi period); min and final"
                        " are both reported"),
    ]
    _write_csv(args.out, meta, ["t", "F"], zip(trace.times, trace.values))
    print(
        f"fidelity[{args.frame}] v={_fmt(p.v)} xi={_fmt(p.xi)}: "
        f"min={_fmt(trace.min_value)} final={_fmt(trace.final_value)}"
    )
    return EXIT_OK


def cmd_phase_diagram(args) -> int:
    p = _params_from_args(args)
    deltas = np.linspace(args.delta_min, args.delta_max, args.delta_points)
    xis = np.linspace(args.xi_min, args.xi_max, args.xi_points)
    result = diagram(args.v, deltas, xis, p, n_max=args.n_max, prescan_step=args.prescan)
    meta = _metadata("phase-diagram", p, args)
    cell_rows = []
    for i, d in enumerate(result.delta_grid):
        for j, x in enumerate(result.xi_grid):
            n = int(result.label_n[i, j])
            cell_rows.append((d, x, phase_label_name(n), n, result.n_bar[i, j]))
    _write_csv(
        args.out + "_cells.csv",
        meta,
        ["delta", "xi", "phase_label", "n_excitation", "n_bar"],
        cell_rows,
    )
    boundary_rows = []
    for curve in result.boundaries:
        for d, x in zip(curve.deltas, curve.xis):
            boundary_rows.append(
                (
                    curve.curve_id,
                    d,
                    x,
                    phase_label_name(curve.left_n) + f":{curve.left_n}",
                    phase_label_name(curve.right_n) + f":{curve.right_n}",
                )
            )
    _write_csv(
        args.out + "_boundaries.csv",
        meta,
        ["curve_id", "delta", "xi", "left_label", "right_label"],
        boundary_rows,
    )
    return EXIT_OK


def cmd_ladder(args) -> int:
    p = _params_from_args(args)
    xis = np.linspace(args.xi_min, args.xi_max, args.xi_points)
    pairs = photon_ladder(args.v, xis, p, delta=args.delta, n_max=args.n_max)
    _write_csv(args.out, _metadata("ladder", p, args), ["xi", "n_bar"], pairs)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    p = _params_from_args(args)
    gs = np.linspace(args.g_min, args.g_max, args.g_points)
    rows = []
    for gv in gs:
        rows.append((gv, "g0", -0.5 * p.omega0))
        for n in range(1, args.n_levels + 1):
            for branch, tag in (("minus", f"{n}-"), ("plus", f"{n}+")):
                rows.append((gv, tag, jc_eigenenergy(n, branch, 1.0, p.delta, float(gv))))
    _write_csv(
        args.out,
        _metadata("spectrum", p, args),
        ["g_over_omega_c", "level_id", "E_over_omega_c"],
        rows,
    )
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value file seeding any flag")
    parser.add_argument("--v", type=float, default=0.33, help="modulation frequency / omega_c")
    parser.add_argument("--xi", type=float, default=0.0, help="dimensionless modulation amplitude")
    parser.add_argument("--delta", type=float, default=0.0, help="detuning / omega_c (sets omega0)")
    parser.add_argument("--g", type=float, default=0.05, help="coupling / omega_c")
    parser.add_argument("--threshold", type=float, default=10.0, help="'much greater' factor")
    parser.add_argument("--n-max", type=int, default=30, help="photon-number cutoff")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fmrabi", description=__doc__.split("\n")[0], allow_abbrev=False
    )
    parser.add_argument("--version", action="version", version=f"fmrabi {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("params", help="effective parameters, regime and ratio report (JSON)")
    _add_common(sp)
    sp.add_argument("--out", default=None, help="write JSON here instead of stdout")
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("sweep", help="relative coupling strengths vs xi (CSV)")
    _add_common(sp)
    sp.add_argument("--xi-min", type=float, default=0.0)
    sp.add_argument("--xi-max", type=float, default=3.0)
    sp.add_argument("--xi-points", type=int, default=601)
    sp.add_argument("--out", default="sweep.csv")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("fidelity", help="fidelity between exact and effective dynamics (CSV)")
    _add_common(sp)
    sp.add_argument("--frame", choices=("first", "second"), default="second")
    sp.add_argument("--alpha", type=float, default=0.1, help="coherent amplitude of the cavity")
    sp.add_argument("--samples", type=int, default=2000)
    sp.add_argument("--window", type=float, default=None,
                    help="duration override (defaults: first frame one modulation period,"
                         " second frame one effective Rabi period)")
    sp.add_argument("--step-factor", type=int, default=200, help="substeps per modulation period")
    sp.add_argument("--guard-tol", type=float, default=GUARD_TOL,
                    help="convergence guard on reported amplitudes")
    sp.add_argument("--max-refinements", type=int, default=MAX_REFINEMENTS)
    sp.add_argument("--bessel-cutoff", type=int, default=None)
    sp.add_argument("--check-cutoff", action="store_true",
                    help="rerun at 2*n_max and record the min-fidelity shift")
    sp.add_argument("--out", default="fidelity.csv")
    sp.set_defaults(func=cmd_fidelity)

    sp = sub.add_parser("phase-diagram", help="ground-state phase over (delta, xi), two CSVs")
    _add_common(sp)
    sp.add_argument("--delta-min", type=float, default=-0.1)
    sp.add_argument("--delta-max", type=float, default=0.1)
    sp.add_argument("--delta-points", type=int, default=201)
    sp.add_argument("--xi-min", type=float, default=0.0)
    sp.add_argument("--xi-max", type=float, default=3.0)
    sp.add_argument("--xi-points", type=int, default=601)
    sp.add_argument("--prescan", type=float, default=1e-3, help="boundary pre-scan step in xi")
    sp.add_argument("--out", default="phase", help="prefix for _cells.csv and _boundaries.csv")
    sp.set_defaults(func=cmd_phase_diagram)

    sp = sub.add_parser("ladder", help="ground-state mean photon number vs xi (CSV)")
    _add_common(sp)
    sp.add_argument("--xi-min", type=float, default=0.0)
    sp.add_argument("--xi-max", type=float, default=3.0)
    sp.add_argument("--xi-points", type=int, default=601)
    sp.add_argument("--out", default="ladder.csv")
    sp.set_defaults(func=cmd_ladder)

    sp = sub.add_parser("spectrum", help="dressed-level energies vs coupling (CSV)")
    _add_common(sp)
    sp.add_argument("--g-min", type=float, default=0.0)
    sp.add_argument("--g-max", type=float, default=3.5)
    sp.add_argument("--g-points", type=int, default=351)
    sp.add_argument("--n-levels", type=int, default=6)
    sp.add_argument("--out", default="spectrum.csv")
    sp.set_defaults(func=cmd_spectrum)

    return parser


# flags whose built-in default is None, so their type cannot be inferred
_NONE_FLAG_CASTS = {"window": float, "bessel_cutoff": int, "out": str}


def _apply_config(args, argv: list[str]) -> None:
    """Overlay config-file values onto args; explicit command-line flags win."""
    config = load_config(args.config)
    explicit = {token.split("=", 1)[0] for token in argv if token.startswith("--")}
    for key, value in config.items():
        if key == "config" or not hasattr(args, key):
            raise ConfigError(f"unknown config key {key!r}")
        if "--" + key.replace("_", "-") in explicit:
            continue
        current = getattr(args, key)
        cast = type(current) if current is not None else _NONE_FLAG_CASTS.get(key, str)
        try:
            if cast is bool:
                setattr(args, key, value.lower() in ("1", "true", "yes"))
            else:
                setattr(args, key, cast(value))
        except ValueError as exc:
            raise ConfigError(f"config key {key!r}: {exc}") from exc


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
        if args.config:
            _apply_config(args, argv)
        return args.func(args)
    except ConfigError as exc:
        print(f"fmrabi: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except StepTooLarge as exc:
        print(f"fmrabi: convergence guard failed: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ValueError, OSError) as exc:
        print(f"fmrabi: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


def entrypoint() -> None:
    sys.exit(main())
