"""Entropy solution of the local discontinuous-velocity law.

The target equation

    q_t + ( f(v(x) q) )_x = 0,        f(u) = u * V(u),

with piecewise constant v > 0 is reduced to a classical conservation law
by the strictly increasing change of coordinates y = F(x), where F is
the antiderivative of 1/v with F(0) = 0. In the new variable,
p(t, y) = v(x) q(t, x) solves p_t + f(p)_y = 0 with no explicit
coefficient, which a standard Godunov scheme resolves toward the unique
entropy solution. Pulling back through F recovers the physical profile.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .grid import CellField, Grid, PiecewiseConstantSpec, sample
from .solver import ModelConfig, SimResult, StepDiagnostics, plan_output_times

__all__ = [
    "PolyFlux",
    "TransformedGrid",
    "transform_forward",
    "godunov_solve",
    "solve_local",
]


@dataclass(frozen=True)
class PolyFlux:
    """Polynomial flux ``f(u) = u * V(u)`` with exact wave-speed data.

    Keeping the flux polynomial makes the interior extrema needed by the
    Godunov interface value (the real roots of ``f'``) and the maximal
    wave speed (extrema of ``f'``) available in closed form.
    """

    poly: Polynomial

    @classmethod
    def from_velocity(cls, V) -> "PolyFlux":
        """Build from a speed-factor polynomial or its coefficients."""
        if not isinstance(V, Polynomial):
            V = Polynomial(np.asarray(V, dtype=float))
        return cls(Polynomial([0.0, 1.0]) * V)

    def __call__(self, u):
        return self.poly(u)

    def derivative(self, u):
        return self.poly.deriv()(u)

    def critical_points(self) -> np.ndarray:
        """Real roots of f', i.e. interior extrema of the flux."""
        d = self.poly.deriv()
        if d.degree() < 1:
            return np.empty(0)
        roots = d.roots()
        real = roots[np.abs(roots.imag) < 1e-9].real
        return np.unique(real)

    def max_abs_speed(self, lo: float, hi: float) -> float:
        """Largest |f'| over [lo, hi]."""
        candidates = [lo, hi]
        d2 = self.poly.deriv(2)
        if d2.degree() >= 1:
            roots = d2.roots()
            candidates.extend(r.real for r in roots
                              if abs(r.imag) < 1e-9 and lo <= r.real <= hi)
        return float(np.max(np.abs(self.derivative(np.asarray(candidates)))))

    def interface_flux(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Godunov interface value.

        Minimum of f over [left, right] when left <= right, maximum over
        [right, left] otherwise; interior extrema are included by
        evaluating f at the critical points that fall inside the state
        interval.
        """
        fl = self(left)
        fr = self(right)
        fmin = np.minimum(fl, fr)
        fmax = np.maximum(fl, fr)
        lo = np.minimum(left, right)
        hi = np.maximum(left, right)
        for c in self.critical_points():
            inside = (lo <= c) & (c <= hi)
            if np.any(inside):
                fc = float(self(c))
                fmin = np.where(inside, np.minimum(fmin, fc), fmin)
                fmax = np.where(inside, np.maximum(fmax, fc), fmax)
        return np.where(left <= right, fmin, fmax)


@dataclass(frozen=True)
class TransformedGrid:
    """Physical grid together with its image under y = F(x).

    ``x_knots``/``y_knots`` tabulate the piecewise linear map at the
    domain ends and every velocity breakpoint inside, so both directions
    evaluate exactly by linear interpolation. The transformed grid is
    uniform with spacing at most dx / max(v), hence nowhere coarser than
    the physical grid.
    """

    physical: Grid
    transformed: Grid
    x_knots: np.ndarray
    y_knots: np.ndarray

    def to_transformed(self, x) -> np.ndarray:
        return np.interp(x, self.x_knots, self.y_knots)

    def to_physical(self, y) -> np.ndarray:
        return np.interp(y, self.y_knots, self.x_knots)

    @property
    def f_edges(self) -> np.ndarray:
        """Map values at all physical cell edges."""
        return self.to_transformed(self.physical.cell_edges)


def transform_forward(v_spec: PiecewiseConstantSpec, grid: Grid) -> TransformedGrid:
    """Exact transform data for a velocity profile on a grid."""
    if min(v_spec.levels) <= 0:
        raise ValueError("velocity levels must be strictly positive")
    recip = v_spec.reciprocal()
    inner = [b for b in v_spec.breakpoints if grid.x_left < b < grid.x_right]
    x_knots = np.asarray([grid.x_left, *inner, grid.x_right])
    y_knots = recip.antiderivative(x_knots)
    v_max = max(v_spec.levels)
    span = y_knots[-1] - y_knots[0]
    n_t = int(np.ceil(span / (grid.dx / v_max) - 1e-12))
    tgrid = Grid(float(y_knots[0]), float(y_knots[-1]), n_t)
    return TransformedGrid(grid, tgrid, x_knots, y_knots)


def _godunov_dt(flux: PolyFlux, p: np.ndarray, dx: float, cfl: float) -> float:
    speed = flux.max_abs_speed(float(np.min(p)), float(np.max(p)))
    if speed == 0.0:
        speed = 1e-30  # degenerate flux: any dt is stable, keep steps finite
    return cfl * dx / speed


def godunov_solve(p0: CellField, flux: PolyFlux, T: float, cfl: float = 0.9,
                  store_every: int = 1,
                  output_times: Optional[Sequence] = None) -> SimResult:
    """Classical Godunov scheme for ``p_t + f(p)_x = 0``.

    Boundary states are extended by copying the first and last cell
    (free in/outflow); the recorded ``outflow`` diagnostic accumulates
    the net boundary flux so the mass identity still closes. The result
    treats the solution itself as the density of the unit-velocity
    frame, so ``w_snapshots`` coincide with ``snapshots``.
    """
    if not (np.isfinite(T) and T >= 0):
        raise ValueError(f"T must be finite and nonnegative, got {T}")
    if not (0 < cfl <= 1):
        raise ValueError(f"cfl must lie in (0, 1], got {cfl}")
    grid = p0.grid
    dx = grid.dx
    dt_max = _godunov_dt(flux, p0.values, dx, cfl)
    times_out = plan_output_times(T, dt_max, store_every, output_times)

    pv = p0.values.copy()
    diag = {name: [] for name in StepDiagnostics.COLUMNS}
    snaps = []
    outflow = 0.0
    t = 0.0
    step_index = 0
    last_dt = 0.0

    def record_state() -> None:
        diag["step"].append(step_index)
        diag["t"].append(t)
        diag["dt"].append(last_dt)
        diag["mass"].append(float(np.sum(pv)) * dx)
        diag["rho_min"].append(float(np.min(pv)))
        diag["rho_max"].append(float(np.max(pv)))
        diag["tv_w"].append(float(np.sum(np.abs(np.diff(pv)))))
        diag["outflow"].append(outflow)

    record_state()
    snaps.append(CellField(grid, pv))

    for t_target in times_out[1:]:
        span = t_target - t
        n_sub = max(1, int(np.ceil(span / dt_max - 1e-12)))
        dt = span / n_sub
        lam = dt / dx
        for j in range(n_sub):
            left = np.concatenate(([pv[0]], pv))
            right = np.concatenate((pv, [pv[-1]]))
            fint = flux.interface_flux(left, right)
            pv = pv - lam * np.diff(fint)
            if not np.all(np.isfinite(pv)):
                raise RuntimeError(f"non-finite state at t={t + dt:.6g}")
            outflow += dt * (fint[-1] - fint[0])
            step_index += 1
            last_dt = dt
            t = t_target if j == n_sub - 1 else t + dt
            record_state()
        snaps.append(CellField(grid, pv))

    diagnostics = StepDiagnostics(**{k: np.asarray(vs) for k, vs in diag.items()})
    ones = CellField(grid, np.ones(grid.n_cells))
    return SimResult(grid, times_out, tuple(snaps), tuple(snaps), ones, diagnostics)


def solve_local(cfg: ModelConfig, grid: Grid, store_every: int = 1,
                output_times: Optional[Sequence] = None,
                with_details: bool = False):
    """Entropy solution of the local law, pulled back to ``grid``.

    The initial data transforms exactly: v*q0 is piecewise constant, so
    its push-forward through F is again piecewise constant and sampled
    by exact averaging on the transformed grid. The pullback evaluates
    the transformed solution at F(cell center) by nearest-cell lookup
    and divides by the pointwise velocity.

    ``cfg.eta`` is ignored; ``cfg.V`` must be a polynomial so the
    Godunov interface values are exact. With ``with_details`` the
    transformed-frame result and the map are returned as well.
    """
    V = cfg.V
    if not isinstance(V, Polynomial):
        raise TypeError("solve_local needs a polynomial speed factor V")
    flux = PolyFlux.from_velocity(V)
    tmap = transform_forward(cfg.v_spec, grid)

    # push the product v*q0 forward: same levels, breakpoints mapped by F;
    # breakpoints outside the domain are dropped first since the map is
    # only defined (and only matters) inside it
    rho0 = cfg.v_spec.product(cfg.q0_spec)
    bp_x = [b for b in rho0.breakpoints if grid.x_left < b < grid.x_right]
    reps = 0.5 * (np.asarray([grid.x_left, *bp_x]) + np.asarray([*bp_x, grid.x_right]))
    bp_y = tuple(float(b) for b in tmap.to_transformed(np.asarray(bp_x)))
    p0_spec = PiecewiseConstantSpec(bp_y, tuple(rho0(reps)))
    p0 = sample(p0_spec, tmap.transformed)

    dt_max = _godunov_dt(flux, p0.values, tmap.transformed.dx, cfg.cfl)
    times_out = plan_output_times(cfg.T, dt_max, store_every, output_times)
    tsim = godunov_solve(p0, flux, cfg.T, cfg.cfl, output_times=times_out)

    centers = grid.cell_centers
    y_c = tmap.to_transformed(centers)
    tg = tmap.transformed
    idx = np.clip(((y_c - tg.x_left) / tg.dx).astype(int), 0, tg.n_cells - 1)
    v_point = cfg.v_spec(centers)

    snaps, wsnaps = [], []
    for p in tsim.snapshots:
        rho_star = p.values[idx]
        snaps.append(CellField(grid, rho_star / v_point))
        wsnaps.append(CellField(grid, rho_star))

    v_field = sample(cfg.v_spec, grid)
    result = SimResult(grid, times_out, tuple(snaps), tuple(wsnaps), v_field,
                       tsim.diagnostics)
    if with_details:
        return result, tsim, tmap
    return result
