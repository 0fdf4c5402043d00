"""Finite-volume suite for a nonlocal conservation law with a velocity
discontinuity, its local limit, and the diagnostics tying them together."""

from .grid import (
    CellField,
    Grid,
    PiecewiseConstantSpec,
    mollify,
    norm_l1,
    norm_linf,
    sample,
    tv,
)
from .kernel import NonlocalHorizon, check_w_identity, eval_w, eval_w_edges
from .solver import ModelConfig, SimResult, StepDiagnostics, run, run_fields, step
from .local_limit import (
    PolyFlux,
    TransformedGrid,
    godunov_solve,
    solve_local,
    transform_forward,
)
from .diagnostics import (
    ConvergenceReport,
    EntropyReport,
    MaxPrincipleReport,
    TestFunction,
    TvBoundReport,
    entropy_residual,
    limit_error,
    max_principle_check,
    mollification_study,
    osl_constant,
    standard_test_functions,
    tv_bounds_check,
    w_collapse_check,
)
from .presets import (
    DEFAULT_WINDOW,
    PRESET_NAMES,
    V_QUADRATIC,
    default_grid,
    preset_config,
    preset_q0_spec,
    preset_v_spec,
)
from .config import RunSpec, load_config
from .sweep import emit_heatmap_data, format_float, run_sweep

__version__ = "0.1.0"

__all__ = [
    "CellField", "Grid", "PiecewiseConstantSpec", "mollify", "norm_l1",
    "norm_linf", "sample", "tv",
    "NonlocalHorizon", "check_w_identity", "eval_w", "eval_w_edges",
    "ModelConfig", "SimResult", "StepDiagnostics", "run", "run_fields", "step",
    "PolyFlux", "TransformedGrid", "godunov_solve", "solve_local",
    "transform_forward",
    "ConvergenceReport", "EntropyReport", "MaxPrincipleReport", "TestFunction",
    "TvBoundReport", "entropy_residual", "limit_error", "max_principle_check",
    "mollification_study", "osl_constant", "standard_test_functions",
    "tv_bounds_check", "w_collapse_check",
    "DEFAULT_WINDOW", "PRESET_NAMES", "V_QUADRATIC", "default_grid",
    "preset_config", "preset_q0_spec", "preset_v_spec",
    "RunSpec", "load_config",
    "emit_heatmap_data", "format_float", "run_sweep",
    "__version__",
]
