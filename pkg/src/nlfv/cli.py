"""Command-line harness: eta sweeps, single runs, and the local reference."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import load_config
from .local_limit import solve_local
from .solver import run
from .sweep import emit_heatmap_data, eta_tag, run_sweep, _write_diagnostics

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nlfv",
        description="Finite-volume runs of the nonlocal conservation law "
                    "with discontinuous velocity and its local limit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("config", help="JSON run configuration")
        p.add_argument("--out", default=None,
                       help="output directory (default: output_dir from the config)")
        p.add_argument("--quiet", action="store_true", help="suppress progress lines")

    p_sweep = sub.add_parser("sweep", help="full eta sweep against the local reference")
    add_common(p_sweep)

    p_single = sub.add_parser("single", help="one nonlocal run at a fixed eta")
    add_common(p_single)
    p_single.add_argument("--eta", type=float, required=True,
                          help="look-ahead range for this run")

    p_local = sub.add_parser("local", help="local reference solution only")
    add_common(p_local)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        spec = load_config(args.config)
    except (OSError, ValueError) as exc:
        print(exc, file=sys.stderr)
        return 2

    out = Path(args.out if args.out is not None else spec.output_dir)

    try:
        if args.command == "sweep":
            report = run_sweep(spec, output_dir=str(out), quiet=args.quiet)
            if not args.quiet:
                print(f"summary written to {out / 'summary.csv'}")
            return 0 if all(s == "ok" for s in report.statuses) else 1

        out.mkdir(parents=True, exist_ok=True)
        times = spec.output_times()
        if args.command == "single":
            if args.eta <= 0:
                print(f"--eta must be positive, got {args.eta}", file=sys.stderr)
                return 2
            sim = run(spec.model(args.eta), spec.grid, output_times=times)
            emit_heatmap_data(sim, out / f"heatmap_eta_{eta_tag(args.eta)}.csv")
            _write_diagnostics(sim, out / f"diag_eta_{eta_tag(args.eta)}.csv")
            if not args.quiet:
                d = sim.diagnostics
                print(f"eta={args.eta:g}: {d.step[-1]} steps, "
                      f"mass {d.mass[0]:.6g} -> {d.mass[-1]:.6g}, "
                      f"v*q in [{d.rho_min.min():.6g}, {d.rho_max.max():.6g}]")
            return 0

        sim = solve_local(spec.model(spec.etas[0]), spec.grid, output_times=times)
        emit_heatmap_data(sim, out / "local_reference.csv")
        if not args.quiet:
            print(f"local reference written to {out / 'local_reference.csv'}")
        return 0
    except Exception as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
