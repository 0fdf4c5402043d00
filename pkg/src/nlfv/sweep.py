"""Sweep orchestration and CSV emission.

A sweep solves the local reference once, runs the nonlocal solver for
every eta on shared output times, and condenses the per-run checks into
one summary row per eta. All numbers are written with 17 significant
digits so files round-trip bit-exactly, and nothing here draws on any
source of nondeterminism: identical specs yield identical bytes.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import numpy as np

from .config import RunSpec
from .diagnostics import (
    ConvergenceReport,
    entropy_residual,
    limit_error,
    max_principle_check,
    mollification_study,
    osl_constant,
    standard_test_functions,
    tv_bounds_check,
)
from .local_limit import solve_local
from .solver import SimResult, run

__all__ = ["run_sweep", "emit_heatmap_data", "format_float", "SUMMARY_COLUMNS"]

SUMMARY_COLUMNS = ("eta", "q_error", "w_error", "max_principle_violation",
                   "tv_ratio", "entropy_min", "status")


def format_float(x: float) -> str:
    """Decimal form with 17 significant digits (lossless for float64)."""
    return format(float(x), ".17g")


def _write_rows(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def emit_heatmap_data(sim: SimResult, path) -> None:
    """Write ``t,x,q,vq`` rows for every snapshot and cell."""
    centers = sim.grid.cell_centers
    vv = sim.v_field.values

    def rows():
        for t, snap in zip(sim.times, sim.snapshots):
            ts = format_float(t)
            q = snap.values
            vq = vv * q
            for j in range(centers.size):
                yield (ts, format_float(centers[j]), format_float(q[j]),
                       format_float(vq[j]))

    _write_rows(Path(path), ("t", "x", "q", "vq"), rows())


def _write_diagnostics(sim: SimResult, path: Path) -> None:
    rows = ([format_float(c) for c in row] for row in sim.diagnostics.as_rows())
    _write_rows(path, sim.diagnostics.COLUMNS, rows)


def eta_tag(eta: float) -> str:
    return repr(float(eta))


def run_sweep(spec: RunSpec, output_dir: Optional[str] = None,
              quiet: bool = True) -> ConvergenceReport:
    """Run the full eta sweep described by ``spec``.

    When ``output_dir`` is given (or ``spec.output_dir`` should be used,
    pass it explicitly), per-eta heatmap and diagnostics files, the
    local reference, and ``summary.csv`` are written there. A failing
    eta is caught, marked in the summary, and does not stop the others.
    """
    times = spec.output_times()
    out = None
    if output_dir is not None:
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)

    local = solve_local(spec.model(spec.etas[0]), spec.grid, output_times=times)
    if out is not None:
        emit_heatmap_data(local, out / "local_reference.csv")

    phis = standard_test_functions(spec.window, spec.T) if spec.T > 0 else ()
    v_spec = spec.resolved_v_spec()
    osl = osl_constant(v_spec)
    tv0 = v_spec.product(spec.resolved_q0_spec()).total_variation()

    q_errors, w_errors, statuses = [], [], []
    summary_rows = []
    for eta in spec.etas:
        cfg = spec.model(eta)
        try:
            sim = run(cfg, spec.grid, output_times=times)
            q_err, w_err = limit_error(sim, local, spec.window)
            mpr = max_principle_check(sim, sim.v_field)
            tvr = tv_bounds_check(sim, tv0, osl, cfg.speed_ceiling())
            ent = min((entropy_residual(sim, sim.v_field, cfg.V, phi).value
                       for phi in phis), default=float("nan"))
            if out is not None:
                emit_heatmap_data(sim, out / f"heatmap_eta_{eta_tag(eta)}.csv")
                _write_diagnostics(sim, out / f"diag_eta_{eta_tag(eta)}.csv")
            q_errors.append(q_err)
            w_errors.append(w_err)
            statuses.append("ok")
            summary_rows.append((format_float(eta), format_float(q_err),
                                 format_float(w_err), format_float(mpr.violation),
                                 format_float(tvr.max_ratio), format_float(ent), "ok"))
            if not quiet:
                print(f"eta={eta:g}: q_error={q_err:.6g} w_error={w_err:.6g}")
        except Exception as exc:  # isolate per-eta failures
            q_errors.append(float("nan"))
            w_errors.append(float("nan"))
            statuses.append("failed")
            summary_rows.append((format_float(eta), "nan", "nan", "nan", "nan",
                                 "nan", "failed"))
            if not quiet:
                print(f"eta={eta:g}: FAILED ({exc})")

    if out is not None:
        _write_rows(out / "summary.csv", SUMMARY_COLUMNS, summary_rows)
        if spec.epsilons:
            for eta in spec.etas:
                study = mollification_study(spec.model(eta), spec.grid,
                                            spec.epsilons, output_times=times)
                rows = [(format_float(e), format_float(qd), format_float(wd),
                         format_float(r))
                        for e, qd, wd, r in zip(study["epsilons"],
                                                study["q_distances"],
                                                study["w_sup_distances"],
                                                study["w_time_tv_ratios"])]
                _write_rows(out / f"mollify_eta_{eta_tag(eta)}.csv",
                            ("epsilon", "q_distance", "w_sup_distance",
                             "w_time_tv_ratio"), rows)

    return ConvergenceReport.from_errors(spec.etas, q_errors, w_errors, statuses)
