"""Bundled example scenarios.

Both presets transport the same block of initial mass with the
quadratic speed factor V(u) = 1 - u^2 across a single velocity jump at
the origin: ``fig1`` drops from 3/2 to 1/2 (one-sided Lipschitz
constant 0), ``fig2`` rises from 1/2 to 3/2.
"""

from __future__ import annotations

from numpy.polynomial import Polynomial

from .grid import Grid, PiecewiseConstantSpec
from .kernel import NonlocalHorizon
from .solver import ModelConfig

__all__ = [
    "V_QUADRATIC",
    "PRESET_NAMES",
    "preset_v_spec",
    "preset_q0_spec",
    "preset_config",
    "default_grid",
    "DEFAULT_WINDOW",
]

V_QUADRATIC = Polynomial([1.0, 0.0, -1.0])

PRESET_NAMES = ("fig1", "fig2")

DEFAULT_WINDOW = (-1.5, 2.5)


def preset_v_spec(name: str) -> PiecewiseConstantSpec:
    if name == "fig1":
        return PiecewiseConstantSpec((0.0,), (1.5, 0.5))
    if name == "fig2":
        return PiecewiseConstantSpec((0.0,), (0.5, 1.5))
    raise ValueError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")


def preset_q0_spec(name: str) -> PiecewiseConstantSpec:
    if name not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")
    return PiecewiseConstantSpec((-0.5, 0.5), (0.0, 0.5, 0.0))


def preset_config(name: str, eta: float, T: float = 1.0,
                  cfl: float = 0.9) -> ModelConfig:
    return ModelConfig(
        V=V_QUADRATIC,
        v_spec=preset_v_spec(name),
        q0_spec=preset_q0_spec(name),
        eta=NonlocalHorizon(float(eta)),
        T=T,
        cfl=cfl,
    )


def default_grid(n_cells: int = 4000) -> Grid:
    return Grid(-2.0, 3.0, n_cells)
