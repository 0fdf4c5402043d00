"""Strict JSON run configuration for the command-line harness."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial

from .grid import Grid, PiecewiseConstantSpec
from .presets import PRESET_NAMES, V_QUADRATIC, preset_q0_spec, preset_v_spec
from .solver import ModelConfig, plan_output_times

__all__ = ["RunSpec", "load_config"]

_TOP_REQUIRED = ("preset", "grid", "T", "etas", "window")
_TOP_OPTIONAL = ("cfl", "store_every", "epsilons", "output_dir",
                 "v_spec", "q0_spec", "V_coeffs")
_CUSTOM_ONLY = ("v_spec", "q0_spec", "V_coeffs")
_GRID_KEYS = ("x_left", "x_right", "n_cells")
_SPEC_KEYS = ("breakpoints", "levels")
_MAX_DEFAULT_SNAPSHOTS = 201


@dataclass(frozen=True)
class RunSpec:
    """Validated description of a sweep: scenario, grid, etas, outputs."""

    preset: str
    grid: Grid
    T: float
    etas: tuple
    window: tuple
    cfl: float = 0.9
    store_every: Optional[int] = None
    epsilons: tuple = ()
    output_dir: str = "out"
    v_spec: Optional[PiecewiseConstantSpec] = None
    q0_spec: Optional[PiecewiseConstantSpec] = None
    V: Polynomial = V_QUADRATIC

    def resolved_v_spec(self) -> PiecewiseConstantSpec:
        return self.v_spec if self.preset == "custom" else preset_v_spec(self.preset)

    def resolved_q0_spec(self) -> PiecewiseConstantSpec:
        return self.q0_spec if self.preset == "custom" else preset_q0_spec(self.preset)

    def model(self, eta: float) -> ModelConfig:
        return ModelConfig(V=self.V, v_spec=self.resolved_v_spec(),
                           q0_spec=self.resolved_q0_spec(), eta=eta,
                           T=self.T, cfl=self.cfl)

    def output_times(self) -> np.ndarray:
        """Shared snapshot times for every run of the sweep.

        Built from the eta-independent step bound so the nonlocal runs
        and the local reference can be compared time by time; the
        default stride keeps at most ~200 intervals.
        """
        cfg = self.model(self.etas[0])
        dt_max = cfg.max_dt(self.grid.dx)
        n_steps = max(1, int(math.ceil(self.T / dt_max - 1e-12)))
        stride = self.store_every
        if stride is None:
            stride = max(1, int(math.ceil(n_steps / (_MAX_DEFAULT_SNAPSHOTS - 1))))
        return plan_output_times(self.T, dt_max, store_every=stride)


def _fail(msg: str) -> None:
    raise ValueError(f"config error: {msg}")


def _check_keys(mapping: dict, required, optional, context: str) -> None:
    missing = [k for k in required if k not in mapping]
    unknown = [k for k in mapping if k not in (*required, *optional)]
    if missing:
        _fail(f"{context} is missing required field(s): {', '.join(missing)}")
    if unknown:
        _fail(f"{context} has unknown field(s): {', '.join(sorted(unknown))}")


def _parse_spec(obj, name: str) -> PiecewiseConstantSpec:
    if not isinstance(obj, dict):
        _fail(f"{name} must be an object with breakpoints and levels")
    _check_keys(obj, _SPEC_KEYS, (), name)
    try:
        return PiecewiseConstantSpec(tuple(obj["breakpoints"]), tuple(obj["levels"]))
    except (TypeError, ValueError) as exc:
        _fail(f"{name}: {exc}")


def load_config(path) -> RunSpec:
    """Read and validate a JSON run configuration.

    Field names must match exactly; unknown or missing fields raise
    ``ValueError`` listing the offenders. ``V_coeffs`` is ordered from
    the constant coefficient upward.
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        _fail(f"invalid JSON in {path}: {exc}")
    if not isinstance(raw, dict):
        _fail("top level must be a JSON object")
    _check_keys(raw, _TOP_REQUIRED, _TOP_OPTIONAL, "config")

    preset = raw["preset"]
    if preset not in (*PRESET_NAMES, "custom"):
        _fail(f"preset must be one of {PRESET_NAMES + ('custom',)}, got {preset!r}")
    if preset != "custom":
        present = [k for k in _CUSTOM_ONLY if k in raw]
        if present:
            _fail(f"field(s) {', '.join(present)} are only allowed with preset "
                  f"'custom', not {preset!r}")

    if not isinstance(raw["grid"], dict):
        _fail("grid must be an object")
    _check_keys(raw["grid"], _GRID_KEYS, (), "grid")
    try:
        grid = Grid(float(raw["grid"]["x_left"]), float(raw["grid"]["x_right"]),
                    int(raw["grid"]["n_cells"]))
    except (TypeError, ValueError) as exc:
        _fail(f"grid: {exc}")

    T = float(raw["T"])
    if not (np.isfinite(T) and T >= 0):
        _fail(f"T must be finite and nonnegative, got {T}")

    etas_raw = raw["etas"]
    if not isinstance(etas_raw, (list, tuple)) or len(etas_raw) == 0:
        _fail("etas must be a non-empty array of positive numbers")
    etas = tuple(float(e) for e in etas_raw)
    if any(not (np.isfinite(e) and e > 0) for e in etas):
        _fail("etas must all be positive and finite")
    if len(set(etas)) != len(etas):
        _fail("etas must not contain duplicates")
    etas = tuple(sorted(etas, reverse=True))

    window_raw = raw["window"]
    if not isinstance(window_raw, (list, tuple)) or len(window_raw) != 2:
        _fail("window must be an array [a, b]")
    window = (float(window_raw[0]), float(window_raw[1]))
    if not window[0] < window[1]:
        _fail(f"window must satisfy a < b, got {window}")
    if window[0] < grid.x_left or window[1] > grid.x_right:
        _fail(f"window {window} must be contained in the grid domain "
              f"[{grid.x_left}, {grid.x_right}]")

    cfl = float(raw.get("cfl", 0.9))
    if not (0 < cfl <= 1):
        _fail(f"cfl must lie in (0, 1], got {cfl}")

    store_every = raw.get("store_every")
    if store_every is not None:
        if int(store_every) != store_every or store_every < 1:
            _fail(f"store_every must be a positive integer, got {store_every}")
        store_every = int(store_every)

    epsilons = tuple(float(e) for e in raw.get("epsilons", ()))
    if any(e <= 0 for e in epsilons):
        _fail("epsilons must be positive")

    output_dir = raw.get("output_dir", "out")
    if not isinstance(output_dir, str) or not output_dir:
        _fail("output_dir must be a non-empty string")

    v_spec = q0_spec = None
    V = V_QUADRATIC
    if preset == "custom":
        missing = [k for k in _CUSTOM_ONLY if k not in raw]
        if missing:
            _fail(f"preset 'custom' requires field(s): {', '.join(missing)}")
        v_spec = _parse_spec(raw["v_spec"], "v_spec")
        q0_spec = _parse_spec(raw["q0_spec"], "q0_spec")
        if min(v_spec.levels) <= 0:
            _fail("v_spec levels must be strictly positive (v_min > 0), got "
                  f"minimum {min(v_spec.levels)}")
        if min(q0_spec.levels) < 0:
            _fail("q0_spec levels must be nonnegative")
        coeffs = raw["V_coeffs"]
        if not isinstance(coeffs, (list, tuple)) or len(coeffs) == 0:
            _fail("V_coeffs must be a non-empty array (constant term first)")
        V = Polynomial(np.asarray([float(c) for c in coeffs]))

    spec = RunSpec(preset=preset, grid=grid, T=T, etas=etas, window=window,
                   cfl=cfl, store_every=store_every, epsilons=epsilons,
                   output_dir=output_dir, v_spec=v_spec, q0_spec=q0_spec, V=V)
    # building a model validates V against the data range (V >= 0, V' <= 0)
    try:
        spec.model(etas[0])
    except ValueError as exc:
        _fail(str(exc))
    return spec
