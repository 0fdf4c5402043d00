"""Checks of the analytical estimates on computed solutions.

Each check compares a simulated run against a bound that the continuum
theory guarantees: the min/max principle for v*q, the uniform total
variation bound for the look-ahead average W, the collapse of W onto
v*q at rate eta, the entropy inequality of the local limit, and the
L1 distance to the transformed reference solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .grid import CellField, PiecewiseConstantSpec, norm_l1, tv
from .solver import SimResult

__all__ = [
    "TestFunction",
    "standard_test_functions",
    "EntropyReport",
    "entropy_residual",
    "MaxPrincipleReport",
    "max_principle_check",
    "TvBoundReport",
    "tv_bounds_check",
    "osl_constant",
    "limit_error",
    "w_collapse_check",
    "mollification_study",
    "ConvergenceReport",
]


# ---------------------------------------------------------------------------
# compactly supported test functions (tensor products of quadratic splines)

def _bspline2(u: np.ndarray) -> np.ndarray:
    # quadratic B-spline on [0, 3], C^1, max 3/4 at u = 3/2
    u = np.asarray(u, dtype=float)
    return np.select(
        [(u >= 0) & (u < 1), (u >= 1) & (u < 2), (u >= 2) & (u <= 3)],
        [0.5 * u**2, 0.5 * (-2 * u**2 + 6 * u - 3), 0.5 * (3 - u) ** 2],
        0.0,
    )


def _bspline2_prime(u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    return np.select(
        [(u >= 0) & (u < 1), (u >= 1) & (u < 2), (u >= 2) & (u <= 3)],
        [u, 3.0 - 2.0 * u, u - 3.0],
        0.0,
    )


def _profile(r):
    return _bspline2(1.5 * (np.asarray(r) + 1.0))


def _profile_prime(r):
    return 1.5 * _bspline2_prime(1.5 * (np.asarray(r) + 1.0))


@dataclass(frozen=True)
class TestFunction:
    """Nonnegative C^1 bump phi(t, x) = P((t-tc)/tw) * P((x-xc)/xw).

    P is a quadratic B-spline profile supported on [-1, 1], so the
    support is the box [tc-tw, tc+tw] x [xc-xw, xc+xw]. The time box may
    reach below zero (the initial-datum term of the entropy functional
    picks up phi(0, .)) but must end strictly before the final time of
    the run it is used with.
    """

    t_center: float
    t_halfwidth: float
    x_center: float
    x_halfwidth: float
    label: str = ""

    def __post_init__(self) -> None:
        if self.t_halfwidth <= 0 or self.x_halfwidth <= 0:
            raise ValueError("halfwidths must be positive")

    def __call__(self, t, x):
        return (_profile((np.asarray(t) - self.t_center) / self.t_halfwidth)
                * _profile((np.asarray(x) - self.x_center) / self.x_halfwidth))

    def dt(self, t, x):
        return (_profile_prime((np.asarray(t) - self.t_center) / self.t_halfwidth)
                / self.t_halfwidth
                * _profile((np.asarray(x) - self.x_center) / self.x_halfwidth))

    def dx(self, t, x):
        return (_profile((np.asarray(t) - self.t_center) / self.t_halfwidth)
                * _profile_prime((np.asarray(x) - self.x_center) / self.x_halfwidth)
                / self.x_halfwidth)

    def w1inf_norm(self) -> float:
        peak = 0.75
        slope = 1.5
        return max(peak * peak,
                   peak * slope / self.t_halfwidth,
                   peak * slope / self.x_halfwidth)

    def x_support(self) -> tuple:
        return (self.x_center - self.x_halfwidth, self.x_center + self.x_halfwidth)

    def t_end(self) -> float:
        return self.t_center + self.t_halfwidth


def standard_test_functions(window, T: float) -> tuple:
    """Five bumps covering the wave region of a run on ``window``.

    Centers and widths scale with the window and horizon time; one bump
    has support reaching below t = 0 so the initial-datum term of the
    entropy functional is exercised.
    """
    a, b = float(window[0]), float(window[1])
    span = b - a
    combos = [
        (0.45 * T, 0.40 * T, a + 0.40 * span, 0.18 * span),
        (0.30 * T, 0.25 * T, a + 0.50 * span, 0.28 * span),
        (0.60 * T, 0.30 * T, a + 0.60 * span, 0.22 * span),
        (0.10 * T, 0.25 * T, a + 0.45 * span, 0.35 * span),
        (0.50 * T, 0.42 * T, a + 0.55 * span, 0.12 * span),
    ]
    funcs = []
    for k, (tc, tw, xc, xw) in enumerate(combos, start=1):
        phi = TestFunction(tc, tw, xc, xw, label=f"bump{k}")
        lo, hi = phi.x_support()
        if lo < a or hi > b or phi.t_end() >= T:
            raise ValueError(f"test function {phi.label} leaves the admissible box")
        funcs.append(phi)
    return tuple(funcs)


# ---------------------------------------------------------------------------
# entropy inequality

@dataclass(frozen=True)
class EntropyReport:
    label: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.value >= -self.tolerance


def _entropy_beta(V, rho_bound: float):
    """beta with beta' = alpha' f', alpha(u) = u^2, f(u) = u V(u).

    Closed form for polynomial V; otherwise tabulated by quadrature on
    [0, rho_bound] and interpolated.
    """
    if isinstance(V, Polynomial):
        fpoly = Polynomial([0.0, 1.0]) * V
        return (Polynomial([0.0, 2.0]) * fpoly.deriv()).integ(lbnd=0.0)
    from scipy.integrate import quad

    nodes = np.linspace(0.0, max(rho_bound, 1e-30) * 1.000001, 257)
    eps = 1e-7 * max(rho_bound, 1.0)

    def fprime(u):
        return ((u + eps) * V(u + eps) - (u - eps) * V(u - eps)) / (2 * eps)

    vals = np.array([quad(lambda s: 2 * s * fprime(s), 0.0, u, limit=200)[0]
                     for u in nodes])
    return lambda u: np.interp(u, nodes, vals)


def entropy_residual(sim: SimResult, v: CellField, V, phi: TestFunction,
                     tol_coeff: float = 10.0) -> EntropyReport:
    """Value of the entropy functional for one test function.

    The functional

        E = int int  (v q)^2 / v * phi_t + beta(v q) * phi_x  dx dt
            + int (v q0)^2 / v * phi(0, .) dx

    is nonnegative for the entropy solution and every nonnegative phi.
    Quadrature is cell-wise in space and midpoint between consecutive
    snapshots in time, so the tolerance scales with dx plus the largest
    snapshot spacing.
    """
    if v.grid != sim.grid:
        raise ValueError("v must live on the simulation grid")
    lo, hi = phi.x_support()
    if lo < sim.grid.x_left or hi > sim.grid.x_right:
        raise ValueError("test function support leaves the grid")
    if phi.t_end() > sim.times[-1]:
        raise ValueError("test function support exceeds the simulated horizon")

    x = sim.grid.cell_centers
    dxc = sim.grid.dx
    vv = v.values
    rho = [s.values * vv for s in sim.snapshots]
    rho_bound = float(np.max(rho[0])) if rho[0].size else 0.0
    beta = _entropy_beta(V, max(rho_bound, float(np.max([np.max(r) for r in rho]))))

    total = float(np.sum(rho[0] ** 2 / vv * phi(0.0, x))) * dxc
    times = sim.times
    for k in range(times.size - 1):
        dt_k = times[k + 1] - times[k]
        tm = 0.5 * (times[k] + times[k + 1])
        rho_m = 0.5 * (rho[k] + rho[k + 1])
        integrand = rho_m**2 / vv * phi.dt(tm, x) + beta(rho_m) * phi.dx(tm, x)
        total += dt_k * float(np.sum(integrand)) * dxc

    dt_quad = float(np.max(np.diff(times))) if times.size > 1 else 0.0
    tol = tol_coeff * (dxc + dt_quad) * phi.w1inf_norm() * (1.0 + rho_bound) ** 3
    return EntropyReport(phi.label, total, tol)


# ---------------------------------------------------------------------------
# bound checks

@dataclass(frozen=True)
class MaxPrincipleReport:
    observed_min: float
    observed_max: float
    lower_bound: float
    upper_bound: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return (self.observed_min >= self.lower_bound - self.tolerance
                and self.observed_max <= self.upper_bound + self.tolerance)

    @property
    def violation(self) -> float:
        return max(0.0, self.lower_bound - self.observed_min,
                   self.observed_max - self.upper_bound)


def max_principle_check(sim: SimResult, v: CellField,
                        tol: float = 1e-6) -> MaxPrincipleReport:
    """Min/max of v*q over every accepted step against the initial range."""
    rho0 = sim.snapshots[0].values * v.values
    return MaxPrincipleReport(
        observed_min=float(np.min(sim.diagnostics.rho_min)),
        observed_max=float(np.max(sim.diagnostics.rho_max)),
        lower_bound=float(np.min(rho0)),
        upper_bound=float(np.max(rho0)),
        tolerance=tol,
    )


def osl_constant(v_spec: PiecewiseConstantSpec) -> float:
    """One-sided Lipschitz constant of a piecewise constant velocity.

    Zero when all jumps go down (the profile is nonincreasing), infinite
    as soon as any jump goes up.
    """
    lv = v_spec.levels
    return float("inf") if any(b > a for a, b in zip(lv, lv[1:])) else 0.0


@dataclass(frozen=True)
class TvBoundReport:
    sup_tv_w: float
    max_ratio: float
    tv_initial: float
    osl: float
    speed_ceiling: float


def tv_bounds_check(sim: SimResult, tv_initial: float, osl: float,
                    speed_ceiling: float) -> TvBoundReport:
    """Total variation of W against tv(v*q0) * exp(2 t L ||V||).

    ``max_ratio`` is the worst observed tv(W(t)) / bound(t) over all
    recorded steps; an infinite OSL constant makes the bound vacuous and
    the ratio zero.
    """
    tvs = sim.diagnostics.tv_w
    sup_tv = float(np.max(tvs))
    if math.isinf(osl):
        return TvBoundReport(sup_tv, 0.0, tv_initial, osl, speed_ceiling)
    bounds = tv_initial * np.exp(2.0 * sim.diagnostics.t * osl * speed_ceiling)
    ratio = float(np.max(tvs / bounds)) if tv_initial > 0 else float("inf")
    return TvBoundReport(sup_tv, ratio, tv_initial, osl, speed_ceiling)


def limit_error(nonlocal_sim: SimResult, local_sim: SimResult, window) -> tuple:
    """Sup over stored times of the windowed L1 distances to the limit.

    Returns ``(q_error, w_error)`` where the first compares the
    densities and the second compares the look-ahead average W with
    v times the limit density. Both runs must have stored identical
    times.
    """
    ta, tb = nonlocal_sim.times, local_sim.times
    if ta.size != tb.size or np.max(np.abs(ta - tb)) > 1e-10 * max(1.0, ta[-1]):
        raise ValueError("runs store different time sets; rerun with shared output times")
    if nonlocal_sim.grid != local_sim.grid:
        raise ValueError("runs live on different grids")
    vv = nonlocal_sim.v_field.values
    grid = nonlocal_sim.grid
    q_err = 0.0
    w_err = 0.0
    for k in range(ta.size):
        dq = nonlocal_sim.snapshots[k].values - local_sim.snapshots[k].values
        dw = nonlocal_sim.w_snapshots[k].values - vv * local_sim.snapshots[k].values
        q_err = max(q_err, norm_l1(CellField(grid, dq), window))
        w_err = max(w_err, norm_l1(CellField(grid, dw), window))
    return q_err, w_err


def w_collapse_check(sim: SimResult, window) -> tuple:
    """Collapse of W onto v*q: returns (lhs, rhs) of

        sup_t ||W - v q||_L1(window)  <=  eta * sup_t tv(W).

    The right-hand side uses the per-step records, so it covers at least
    the stored times on the left.
    """
    vv = sim.v_field.values
    lhs = 0.0
    for k in range(sim.times.size):
        diff = sim.w_snapshots[k].values - vv * sim.snapshots[k].values
        lhs = max(lhs, norm_l1(CellField(sim.grid, diff), window))
    rhs = float(np.max(sim.diagnostics.tv_w))
    return lhs, rhs


# ---------------------------------------------------------------------------
# stability under mollification of the coefficients

def mollification_study(cfg, grid, epsilons: Sequence, store_every: int = 1,
                        output_times: Optional[Sequence] = None) -> dict:
    """Distance between runs with mollified and sharp coefficients.

    For each radius eps the velocity and the initial datum are smoothed
    with the quadratic bump before running; reported are the
    C([0,T]; L1) distance of q and the sup-norm distance of W against
    the sharp run, plus the time-variation diagnostic
    max_t ||dW/dt||_L1 / (parabolic bound) for the smoothed runs.
    """
    from .grid import mollify, sample as _sample
    from .solver import run_fields

    eps_list = [float(e) for e in epsilons]
    if any(e <= 0 for e in eps_list):
        raise ValueError("mollification radii must be positive")

    v0 = _sample(cfg.v_spec, grid)
    q0 = _sample(cfg.q0_spec, grid)
    base = run_fields(v0, q0, cfg, store_every=store_every, output_times=output_times)
    window = (grid.x_left, grid.x_right)

    q_dists, w_dists, tv_time_ratios = [], [], []
    for eps in eps_list:
        v_eps = mollify(v0, eps)
        q_eps = mollify(q0, eps)
        sim = run_fields(v_eps, q_eps, cfg, output_times=base.times)
        qd = 0.0
        wd = 0.0
        for k in range(base.times.size):
            dq = sim.snapshots[k].values - base.snapshots[k].values
            qd = max(qd, norm_l1(CellField(grid, dq), window))
            wd = max(wd, float(np.max(np.abs(
                sim.w_snapshots[k].values - base.w_snapshots[k].values))))
        q_dists.append(qd)
        w_dists.append(wd)
        # time-variation of W per unit time against the transport bound
        rho_bound = float(np.max(v_eps.values * q_eps.values))
        speed = cfg.v_max * (cfg.speed_ceiling() + rho_bound * cfg.slope_bound())
        ratio = 0.0
        for k in range(base.times.size - 1):
            dt_k = sim.times[k + 1] - sim.times[k]
            rate = norm_l1(CellField(grid, sim.w_snapshots[k + 1].values
                                     - sim.w_snapshots[k].values), window) / dt_k
            bound = (speed * float(np.max(sim.diagnostics.tv_w))
                     + 2 * rho_bound * cfg.speed_ceiling() * tv(v_eps))
            if bound > 0:
                ratio = max(ratio, rate / bound)
        tv_time_ratios.append(ratio)

    return {
        "epsilons": eps_list,
        "q_distances": q_dists,
        "w_sup_distances": w_dists,
        "w_time_tv_ratios": tv_time_ratios,
    }


# ---------------------------------------------------------------------------
# convergence summary

@dataclass(frozen=True)
class ConvergenceReport:
    """Errors against the local reference across a decreasing eta sweep."""

    etas: tuple
    q_errors: tuple
    w_errors: tuple
    observed_rates: tuple
    statuses: tuple

    def __post_init__(self) -> None:
        n = len(self.etas)
        if not (len(self.q_errors) == len(self.w_errors)
                == len(self.observed_rates) == len(self.statuses) == n):
            raise ValueError("report arrays must align with etas")
        if any(b >= a for a, b in zip(self.etas, self.etas[1:])):
            raise ValueError("etas must be strictly decreasing")

    @classmethod
    def from_errors(cls, etas, q_errors, w_errors, statuses) -> "ConvergenceReport":
        rates = [float("nan")]
        for k in range(1, len(etas)):
            prev, cur = q_errors[k - 1], q_errors[k]
            ok = (statuses[k - 1] == "ok" and statuses[k] == "ok"
                  and prev > 0 and cur > 0)
            rates.append(math.log2(prev / cur) if ok else float("nan"))
        return cls(tuple(etas), tuple(q_errors), tuple(w_errors),
                   tuple(rates), tuple(statuses))
