"""Command-line front end.

Exit status: 0 success, 2 invalid input, 3 I/O failure, 4 verification failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .backend import available_backends
from .errors import MilburnError, VerificationError
from .experiments import (
    PRESETS,
    SweepSpec,
    TimeGrid,
    figure_preset,
    parameter_sweep,
    time_series,
    write_csv,
    write_manifest,
)
from .normal_modes import SystemParams, derive_modes
from .plotting import write_svg
from .quantifiers import STEERING_DET_SCALE

EXIT_OK, EXIT_INPUT, EXIT_IO, EXIT_VERIFY = 0, 2, 3, 4
ORACLE_STRIDE = 100
SVG_COLUMNS = ("N1", "N2", "E_N", "S_ab", "S_ba")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # one-line diagnostics instead of usage dumps; exit code is set by main()
    def error(self, message):
        raise _UsageError(message)


def _physical(p: argparse.ArgumentParser):
    g = p.add_argument_group("physical parameters")
    g.add_argument("--omega1", type=float, default=1.0, help="bare frequency of oscillator a (default 1)")
    g.add_argument("--omega2", type=float, default=1.0, help="bare frequency of oscillator b (default 1)")
    g.add_argument("-J", "--coupling", dest="J", type=float, default=0.2, help="coupling strength (default 0.2)")
    g.add_argument("--gamma", type=float, default=100.0, help="Milburn rate Gamma (default 100)")


def _grid(p: argparse.ArgumentParser):
    g = p.add_argument_group("time grid")
    g.add_argument("--t-start", type=float, default=0.0)
    g.add_argument("--t-max", type=float, default=100.0)
    g.add_argument("--steps", type=int, default=2001)


def _run_opts(p: argparse.ArgumentParser, kernel=True):
    if kernel:
        p.add_argument("--kernel", choices=("milburn", "von-neumann"), default="milburn")
    p.add_argument("--output-dir", type=Path, default=Path("."))
    p.add_argument("--svg", action="store_true", help="also write SVG line charts")
    p.add_argument("--raw", action="store_true", help="add unclamped E_N/steering columns")
    p.add_argument("--steering-scale", type=float, default=STEERING_DET_SCALE, help="det factor in steering")
    p.add_argument("--backend", choices=["auto", *available_backends()], default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="milburnosc", description="Coupled oscillators under Milburn intrinsic decoherence.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("modes", help="print normal-mode data")
    _physical(p)

    p = sub.add_parser("evolve", help="single time series to evolve.csv")
    _physical(p)
    _grid(p)
    _run_opts(p)
    p.add_argument("--oracle", action="store_true", help=f"series-oracle check on every {ORACLE_STRIDE}th point")

    p = sub.add_parser("sweep", help="one run per value of a parameter")
    _physical(p)
    _grid(p)
    _run_opts(p)
    p.add_argument("--axis", choices=("J", "omega2", "Gamma"), required=True)
    p.add_argument("--values", type=float, nargs="+", required=True)

    p = sub.add_parser("figure", help="preset figure study")
    p.add_argument("preset", choices=PRESETS)
    _grid(p)
    _run_opts(p, kernel=False)

    p = sub.add_parser("verify", help="run the built-in oracle suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=25)
    return parser


def _params(args) -> SystemParams:
    params = SystemParams(args.omega1, args.omega2, args.J, args.gamma)
    derive_modes(params)  # stability and domain checks
    return params


def _time_grid(args) -> TimeGrid:
    return TimeGrid(args.t_start, args.t_max, args.steps)


def _params_dict(p: SystemParams) -> dict:
    return {"omega1": p.omega1, "omega2": p.omega2, "J": p.J, "Gamma": p.Gamma}


def _grid_dict(g: TimeGrid) -> dict:
    return {"t_start": g.t_start, "t_end": g.t_end, "steps": int(g.steps)}


def _backend_name(args):
    return None if args.backend in (None, "auto") else args.backend


def _emit(result, out: Path, stem: str, args) -> dict:
    csv_path = write_csv(result, out / f"{stem}.csv", raw=args.raw)
    entry = {
        "file": csv_path.name,
        "params": _params_dict(result.params),
        "kernel": result.kernel,
        "flags": result.flags,
        "rows": len(result),
    }
    if args.svg:
        t = result.times
        series = {c: (t, result.column(c)) for c in SVG_COLUMNS}
        svg = write_svg(out / f"{stem}.svg", series, title=stem, ylabel="value")
        entry["svg"] = svg.name
    return entry


def _cmd_modes(args) -> int:
    m = derive_modes(_params(args))
    doc = {
        "R": m.R,
        "g": m.g,
        "theta": m.theta,
        "Omega1": m.Omega1,
        "Omega2": m.Omega2,
        "s1": m.s1,
        "s2": m.s2,
        "isotropic": m.is_isotropic,
    }
    print(json.dumps(doc, indent=2))
    return EXIT_OK


def _cmd_evolve(args) -> int:
    params, grid = _params(args), _time_grid(args)
    out = _outdir(args)
    res = time_series(
        params,
        grid,
        args.kernel,
        args.steering_scale,
        oracle_every=ORACLE_STRIDE if args.oracle else None,
        backend=_backend_name(args),
    )
    entry = _emit(res, out, "evolve", args)
    write_manifest(out / "manifest.json", [entry], command="evolve", grid=_grid_dict(grid))
    print(f"wrote {out / entry['file']} ({entry['rows']} rows)")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    base, grid = _params(args), _time_grid(args)
    spec = SweepSpec(base, args.axis, tuple(args.values), grid)
    for v in spec.values:
        derive_modes(base.replace(**{spec.axis: v}))
    out = _outdir(args)
    cells = parameter_sweep(spec, args.kernel, args.steering_scale, backend=_backend_name(args))
    entries = []
    for k, cell in enumerate(cells):
        if not cell.ok:
            raise MilburnError(f"sweep cell {spec.axis}={cell.value:g} failed: {cell.error}")
        entries.append(_emit(cell.result, out, f"sweep_{k:03d}_{spec.axis}_{cell.value:g}", args))
    write_manifest(out / "manifest.json", entries, command="sweep", axis=spec.axis, grid=_grid_dict(grid))
    print(f"wrote {len(entries)} CSV files to {out}")
    return EXIT_OK


def _cmd_figure(args) -> int:
    grid = _time_grid(args)
    configs = figure_preset(args.preset, grid)
    out = _outdir(args)
    entries = []
    for cfg in configs:
        res = time_series(cfg.params, cfg.grid, cfg.kernel, args.steering_scale, backend=_backend_name(args))
        entry = _emit(res, out, cfg.label, args)
        entry["label"] = cfg.label
        entries.append(entry)
    write_manifest(out / "manifest.json", entries, command="figure", preset=args.preset, grid=_grid_dict(grid))
    print(f"wrote {len(entries)} CSV files to {out}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verify import run_verification

    if args.samples < 1:
        raise MilburnError(f"--samples must be >= 1, got {args.samples}")
    checks = run_verification(seed=args.seed, samples=args.samples)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.suite}: {c.name} ({c.detail})")
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed} passed, {failed} failed")
    return EXIT_VERIFY if failed else EXIT_OK


def _outdir(args) -> Path:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


COMMANDS = {
    "modes": _cmd_modes,
    "evolve": _cmd_evolve,
    "sweep": _cmd_sweep,
    "figure": _cmd_figure,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"milburnosc: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](args)
    except (VerificationError, ArithmeticError) as exc:
        print(f"milburnosc: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except MilburnError as exc:
        print(f"milburnosc: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"milburnosc: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
