"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 computational error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from pathlib import Path

from .analytical import N_MAX
from .core import (
    DegenerateState,
    EvanescentLead,
    ImpedanceError,
    ProfileTooLarge,
    PropagatingLead,
    UnitMode,
    UnitSystem,
)
from .profile_io import ProfileFormatError, load_profile
from .spectrum import Engine, EnergyGrid, benchmark, find_bound_states, impedance_function, sweep_transmission

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_COMPUTE = 3


class InputError(Exception):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _json_number(x: float):
    return None if math.isnan(x) else float(x)


def _load(args):
    try:
        profile, units = load_profile(args.profile)
    except FileNotFoundError:
        raise InputError(f"profile not found: {args.profile}") from None
    except IsADirectoryError:
        raise InputError(f"profile is a directory: {args.profile}") from None
    if args.units is not None:
        mass = args.effective_mass if args.effective_mass is not None else units.effective_mass_ratio
        units = UnitSystem(UnitMode(args.units), mass)
    elif args.effective_mass is not None:
        units = UnitSystem(units.mode, args.effective_mass)
    return profile, units


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


def sidecar_path(output: str) -> Path:
    return Path(output).with_suffix(".resonances.json")


def cmd_transmission(args) -> int:
    profile, units = _load(args)
    grid = EnergyGrid(args.start, args.stop, args.samples)
    spectrum = sweep_transmission(profile, grid, args.engine, units)
    buf = io.StringIO(newline="\n")
    buf.write(f"# units={units.mode.value}\n")
    buf.write("energy,transmission\n")
    for e, t in zip(spectrum.energies, spectrum.transmission):
        buf.write(f"{fmt(e)},{fmt(t)}\n")
    resonances = {
        "units": units.mode.value,
        "engine": Engine(args.engine).value,
        "resonances": [
            {"energy": r.energy, "transmission": r.transmission, "fwhm": _json_number(r.fwhm)}
            for r in spectrum.resonances
        ],
        "failed_energies": spectrum.failed,
    }
    _write(args.output, buf.getvalue())
    if args.output is not None:
        sidecar_path(args.output).write_text(json.dumps(resonances, indent=2) + "\n")
    if spectrum.failed:
        print(f"warning: {len(spectrum.failed)} samples failed", file=sys.stderr)
    return EXIT_OK


def cmd_bound_states(args) -> int:
    profile, units = _load(args)
    states = find_bound_states(profile, args.emin, args.emax, args.scan_points, units)
    doc = {
        "units": units.mode.value,
        "bound_states": [{"energy": e, "residual": r} for e, r in zip(states.energies, states.residuals)],
    }
    _write(args.output, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_impedance(args) -> int:
    profile, units = _load(args)
    evaluate = impedance_function(args.engine, units)
    buf = io.StringIO(newline="\n")
    buf.write(f"# units={units.mode.value}\n")
    buf.write("energy,impedance_real,impedance_imag\n")
    for e in args.energy:
        z = evaluate(profile, e)
        buf.write(f"{fmt(e)},{fmt(z.real)},{fmt(z.imag)}\n")
    _write(args.output, buf.getvalue())
    return EXIT_OK


def cmd_bench(args) -> int:
    if any(n < 0 for n in args.sizes):
        raise InputError("sizes must be non-negative")
    rows = benchmark(args.sizes, args.repetitions, n_max=args.n_max)
    out = [f"{'N':>5} {'iterative_s':>14} {'analytical_s':>14} {'ratio':>10}"]
    for row in rows:
        if row.analytical is None:
            out.append(f"{row.n:>5} {row.iterative:>14.6e} {'skipped':>14} {'skipped':>10}")
        else:
            out.append(f"{row.n:>5} {row.iterative:>14.6e} {row.analytical:>14.6e} {row.ratio:>10.3f}")
    print("\n".join(out))
    return EXIT_OK


def _add_profile_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("profile", help="profile text file")
    p.add_argument("--units", choices=[m.value for m in UnitMode], help="override the profile's unit system")
    p.add_argument("--effective-mass", type=float, help="effective mass ratio (nm-ev units)")
    p.add_argument("--output", "-o", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wave-impedance", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    engines = [e.value for e in Engine]

    p = sub.add_parser("transmission", help="transmission spectrum T(E) as CSV plus resonance JSON")
    _add_profile_args(p)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--engine", choices=engines, default="analytical")
    p.set_defaults(func=cmd_transmission)

    p = sub.add_parser("bound-states", help="bound-state energies as JSON")
    _add_profile_args(p)
    p.add_argument("--emin", type=float)
    p.add_argument("--emax", type=float)
    p.add_argument("--scan-points", "--samples", dest="scan_points", type=int, default=2000)
    p.set_defaults(func=cmd_bound_states)

    p = sub.add_parser("impedance", help="input impedance at given energies as CSV")
    _add_profile_args(p)
    p.add_argument("--energy", "-E", type=float, nargs="+", required=True)
    p.add_argument("--engine", choices=engines, default="analytical")
    p.set_defaults(func=cmd_impedance)

    p = sub.add_parser("bench", help="time iterative vs analytical engines")
    p.add_argument("--sizes", "-N", type=int, nargs="+", required=True)
    p.add_argument("--repetitions", type=int, default=5)
    p.add_argument("--n-max", type=int, default=N_MAX)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ProfileFormatError, EvanescentLead, PropagatingLead, ProfileTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DegenerateState, ImpedanceError, ArithmeticError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except Exception as exc:  # never dump a traceback on the shell
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
