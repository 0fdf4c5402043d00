"""Explicit upwind finite-volume scheme for the nonlocal conservation law

    q_t + ( v(x) * V(W[v q]) * q )_x = 0,

where W is the exponential look-ahead average of v*q. The transport
speed v*V(W) is nonnegative, so the update is a pure upwind sweep with
zero inflow at the left boundary and free outflow at the right one. W is
recomputed from the current state in every step (explicit coupling).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.signal import lfilter

from .grid import CellField, Grid, PiecewiseConstantSpec, sample
from .kernel import NonlocalHorizon

__all__ = [
    "ModelConfig",
    "StepDiagnostics",
    "SimResult",
    "step",
    "run",
    "run_fields",
    "plan_output_times",
]

_SAMPLES = 513  # resolution for scanning V and V' over the data range


@dataclass(frozen=True)
class ModelConfig:
    """Problem data for one nonlocal run.

    ``V`` maps the look-ahead average to a speed factor and must be
    nonincreasing and nonnegative on the reachable range
    ``[0, sup(v*q0)]``; both conditions are checked by dense sampling.
    ``V_prime`` defaults to ``V.deriv()`` when ``V`` is a numpy
    Polynomial.
    """

    V: Callable
    v_spec: PiecewiseConstantSpec
    q0_spec: PiecewiseConstantSpec
    eta: NonlocalHorizon
    T: float
    cfl: float = 0.9
    V_prime: Optional[Callable] = None

    def __post_init__(self) -> None:
        if not isinstance(self.eta, NonlocalHorizon):
            object.__setattr__(self, "eta", NonlocalHorizon(float(self.eta)))
        if not (np.isfinite(self.T) and self.T >= 0):
            raise ValueError(f"T must be finite and nonnegative, got {self.T}")
        if not (0 < self.cfl <= 1):
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if min(self.v_spec.levels) <= 0:
            raise ValueError(
                "velocity levels must be strictly positive (v_min > 0), "
                f"got minimum {min(self.v_spec.levels)}"
            )
        if min(self.q0_spec.levels) < 0:
            raise ValueError("initial data must be nonnegative")
        if self.V_prime is None:
            deriv = getattr(self.V, "deriv", None)
            if deriv is None:
                raise ValueError("V_prime is required when V has no .deriv()")
            object.__setattr__(self, "V_prime", deriv())
        xs = np.linspace(0.0, max(self.rho_bound, 1e-30), _SAMPLES)
        if np.min(self.V(xs)) < -1e-12:
            raise ValueError("V must be nonnegative on [0, sup(v*q0)]")
        if np.max(self.V_prime(xs)) > 1e-12:
            raise ValueError("V must be nonincreasing on [0, sup(v*q0)]")

    @property
    def rho_bound(self) -> float:
        """Exact essential sup of v*q0."""
        return self.v_spec.product(self.q0_spec).esssup()

    @property
    def v_max(self) -> float:
        return max(self.v_spec.levels)

    def speed_ceiling(self) -> float:
        """Upper bound for V on the reachable range."""
        xs = np.linspace(0.0, max(self.rho_bound, 1e-30), _SAMPLES)
        return float(max(np.max(self.V(xs)), self.V(0.0)))

    def slope_bound(self) -> float:
        """Upper bound for |V'| on the reachable range."""
        xs = np.linspace(0.0, max(self.rho_bound, 1e-30), _SAMPLES)
        return float(np.max(np.abs(self.V_prime(xs))))

    def max_dt(self, dx: float) -> float:
        # The denominator carries the extra rho_bound*|V'| term so that
        # each update of v*q is a convex combination of neighbor values;
        # this keeps min/max bounds of v*q exact for every step, not
        # just in the dx -> 0 limit.
        denom = self.v_max * (self.speed_ceiling() + self.rho_bound * self.slope_bound())
        return self.cfl * dx / denom


@dataclass
class StepDiagnostics:
    """Per-state scalar records, one row per accepted time level."""

    step: np.ndarray
    t: np.ndarray
    dt: np.ndarray
    mass: np.ndarray
    rho_min: np.ndarray
    rho_max: np.ndarray
    tv_w: np.ndarray
    outflow: np.ndarray

    COLUMNS = ("step", "t", "dt", "mass", "rho_min", "rho_max", "tv_w", "outflow")

    def as_rows(self):
        return zip(self.step, self.t, self.dt, self.mass, self.rho_min,
                   self.rho_max, self.tv_w, self.outflow)


@dataclass(frozen=True)
class SimResult:
    """Snapshots plus per-step diagnostics of one run.

    ``w_snapshots`` holds the look-ahead average collocated at left cell
    edges at the same times as ``snapshots``. For solvers where the
    average degenerates to ``v*q`` itself, that product is stored.
    """

    grid: Grid
    times: np.ndarray
    snapshots: tuple
    w_snapshots: tuple
    v_field: CellField
    diagnostics: StepDiagnostics

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        if times.ndim != 1 or times.size == 0:
            raise ValueError("times must be a nonempty 1-d array")
        if np.any(np.diff(times) <= 0) and times.size > 1:
            raise ValueError("snapshot times must be strictly increasing")
        if not (len(self.snapshots) == len(self.w_snapshots) == times.size):
            raise ValueError("snapshot lists must align with times")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "snapshots", tuple(self.snapshots))
        object.__setattr__(self, "w_snapshots", tuple(self.w_snapshots))


def plan_output_times(T: float, dt_max: float, store_every: int = 1,
                      output_times: Optional[Sequence] = None) -> np.ndarray:
    """Times at which snapshots are taken, always including 0 and T."""
    if output_times is not None:
        ts = np.asarray(output_times, dtype=float)
        if ts.ndim != 1 or ts.size < 1:
            raise ValueError("output_times must be a 1-d sequence")
        if abs(ts[0]) > 1e-14 or abs(ts[-1] - T) > 1e-12 * max(1.0, T):
            raise ValueError("output_times must start at 0 and end at T")
        if np.any(np.diff(ts) <= 0):
            raise ValueError("output_times must be strictly increasing")
        return ts
    if T == 0:
        return np.array([0.0])
    if store_every < 1:
        raise ValueError("store_every must be a positive integer")
    stride = store_every * dt_max
    ts = list(np.arange(0.0, T, stride))
    # guard against a snapshot nearly coincident with T
    if ts and T - ts[-1] < 1e-9 * dt_max:
        ts.pop()
    ts.append(T)
    return np.asarray(ts)


def _filter_w(g: np.ndarray, a: float, out: np.ndarray) -> None:
    # right-to-left recurrence W_k = a W_{k+1} + (1-a) g_k with W_n = 0
    out[-1] = 0.0
    out[:-1] = lfilter([1.0 - a], [1.0, -a], np.ascontiguousarray(g[::-1]))[::-1]


def _upwind(qv: np.ndarray, vv: np.ndarray, w: np.ndarray, V, lam: float):
    # interface k sits between cells k-1 and k; the upwind state is the
    # left cell, the speed factor uses W at that interface
    flux = np.empty(qv.size + 1)
    flux[0] = 0.0
    flux[1:] = vv * V(w[1:]) * qv
    return qv - lam * np.diff(flux), flux[-1]


def step(q: CellField, v: CellField, cfg: ModelConfig, dt: float) -> CellField:
    """One explicit upwind step of size ``dt``.

    Raises ``ValueError`` when ``dt`` violates the step-size bound of
    ``cfg`` (see :meth:`ModelConfig.max_dt`).
    """
    if q.grid != v.grid:
        raise ValueError("q and v must live on the same grid")
    dx = q.grid.dx
    if dt > cfg.max_dt(dx) * (1 + 1e-9):
        raise ValueError(
            f"CFL violation: dt={dt} exceeds the stable bound {cfg.max_dt(dx)}"
        )
    a = float(np.exp(-dx / cfg.eta.eta))
    w = np.empty(q.grid.n_cells + 1)
    _filter_w(v.values * q.values, a, w)
    q_new, _ = _upwind(q.values, v.values, w, cfg.V, dt / dx)
    return CellField(q.grid, q_new)


def _support_check(cfg: ModelConfig, grid: Grid) -> None:
    lo, hi = cfg.q0_spec.support()
    if not np.isfinite(lo) or not np.isfinite(hi):
        raise ValueError("initial data must be compactly supported")
    reach = hi + cfg.T * cfg.v_max * cfg.speed_ceiling()
    eps = 1e-12 * max(1.0, abs(grid.x_left), abs(grid.x_right))
    if lo - 1.0 < grid.x_left - eps or reach > grid.x_right + eps:
        raise ValueError(
            "grid window too small: need margin 1 left of the initial support "
            f"and the reachable point {reach} inside [{grid.x_left}, {grid.x_right}]"
        )


def run(cfg: ModelConfig, grid: Grid, store_every: int = 1,
        output_times: Optional[Sequence] = None) -> SimResult:
    """Integrate the nonlocal law up to ``cfg.T`` on ``grid``.

    Snapshots are stored every ``store_every`` steps (plus the final
    state) unless explicit ``output_times`` are given, in which case the
    stepper lands on those times exactly by clipping step sizes.
    Diagnostics are recorded at every accepted time level. Non-finite
    values abort the run with a diagnostic message.
    """
    _support_check(cfg, grid)
    v = sample(cfg.v_spec, grid)
    q0 = sample(cfg.q0_spec, grid)
    return run_fields(v, q0, cfg, store_every=store_every, output_times=output_times)


def run_fields(v: CellField, q0: CellField, cfg: ModelConfig, store_every: int = 1,
               output_times: Optional[Sequence] = None) -> SimResult:
    """Like :func:`run` but on already-sampled (possibly mollified) fields.

    Stability bounds are taken from the fields themselves, so smoothed
    inputs with a smaller data range remain admissible.
    """
    if v.grid != q0.grid:
        raise ValueError("v and q0 must live on the same grid")
    if np.min(v.values) <= 0:
        raise ValueError("velocity field must be strictly positive")
    if np.min(q0.values) < -1e-14:
        raise ValueError("initial field must be nonnegative")

    grid = v.grid
    dx = grid.dx
    dt_max = cfg.max_dt(dx)
    times_out = plan_output_times(cfg.T, dt_max, store_every, output_times)

    eta = cfg.eta.eta
    a = float(np.exp(-dx / eta))
    V = cfg.V

    qv = q0.values.copy()
    vv = v.values
    w = np.empty(grid.n_cells + 1)

    diag = {name: [] for name in StepDiagnostics.COLUMNS}
    snaps, wsnaps = [], []
    outflow = 0.0
    t = 0.0
    step_index = 0
    last_dt = 0.0

    def record_state() -> None:
        _filter_w(vv * qv, a, w)
        rho = vv * qv
        diag["step"].append(step_index)
        diag["t"].append(t)
        diag["dt"].append(last_dt)
        diag["mass"].append(float(np.sum(qv)) * dx)
        diag["rho_min"].append(float(np.min(rho)))
        diag["rho_max"].append(float(np.max(rho)))
        diag["tv_w"].append(float(np.sum(np.abs(np.diff(w[:-1])))))
        diag["outflow"].append(outflow)

    record_state()  # also fills w for the first step
    snaps.append(CellField(grid, qv))
    wsnaps.append(CellField(grid, w[:-1]))

    for t_target in times_out[1:]:
        span = t_target - t
        n_sub = max(1, int(np.ceil(span / dt_max - 1e-12)))
        dt = span / n_sub
        for j in range(n_sub):
            # w already matches the current state (refreshed by record_state)
            qv, boundary_flux = _upwind(qv, vv, w, V, dt / dx)
            if not np.all(np.isfinite(qv)):
                raise RuntimeError(
                    f"non-finite state at t={t + dt:.6g} (step {step_index + 1}); "
                    f"last finite bounds: mass={diag['mass'][-1]:.6g}, "
                    f"rho in [{diag['rho_min'][-1]:.6g}, {diag['rho_max'][-1]:.6g}]"
                )
            outflow += dt * boundary_flux
            step_index += 1
            last_dt = dt
            # land exactly on the snapshot time despite roundoff
            t = t_target if j == n_sub - 1 else t + dt
            record_state()
        snaps.append(CellField(grid, qv))
        wsnaps.append(CellField(grid, w[:-1]))

    diagnostics = StepDiagnostics(**{k: np.asarray(vs) for k, vs in diag.items()})
    return SimResult(grid, times_out, tuple(snaps), tuple(wsnaps), v, diagnostics)
