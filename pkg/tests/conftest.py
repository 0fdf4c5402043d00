"""Shared fixtures: the preset runs reused by several acceptance checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict

import numpy as np
import pytest

import nlfv

# the eta ladder exercised by the bound checks (largest to smallest)
ETA_LADDER = (1.0, 0.1, 0.01, 1e-3, 1e-4)


@dataclass(frozen=True)
class PresetSweep:
    """One preset solved for every eta on shared output times."""

    name: str
    spec: nlfv.RunSpec
    grid: nlfv.Grid
    times: np.ndarray
    runs: Dict[float, nlfv.SimResult]
    local: nlfv.SimResult


def _build_sweep(name: str, n_cells: int = 4000) -> PresetSweep:
    grid = nlfv.default_grid(n_cells)
    spec = nlfv.RunSpec(preset=name, grid=grid, T=1.0, etas=ETA_LADDER,
                        window=nlfv.DEFAULT_WINDOW)
    times = spec.output_times()
    runs = {eta: nlfv.run(spec.model(eta), grid, output_times=times)
            for eta in ETA_LADDER}
    local = nlfv.solve_local(spec.model(ETA_LADDER[0]), grid, output_times=times)
    return PresetSweep(name, spec, grid, times, runs, local)


@pytest.fixture(scope="session")
def preset_sweeps() -> Dict[str, PresetSweep]:
    """Both bundled scenarios at n=4000 across the full eta ladder."""
    return {name: _build_sweep(name) for name in nlfv.PRESET_NAMES}


@pytest.fixture(scope="session")
def fig2_half_horizon() -> nlfv.SimResult:
    """Upward-jump scenario at the smallest eta, stopped at T = 0.5."""
    grid = nlfv.default_grid(4000)
    spec = nlfv.RunSpec(preset="fig2", grid=grid, T=0.5, etas=(1e-4,),
                        window=nlfv.DEFAULT_WINDOW)
    return nlfv.run(spec.model(1e-4), grid, output_times=spec.output_times())
