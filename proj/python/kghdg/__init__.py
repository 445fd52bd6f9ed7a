"""HDG solver for the nonlinear Klein-Gordon equation u_tt - Lap u + u^3 - u = g."""

from ._kghdg import (
    ConfigError,
    SolverError,
    case_info,
    default_dt,
    mesh_info,
    run_convergence,
    run_energy,
    run_single,
)

__all__ = [
    "ConfigError",
    "SolverError",
    "case_info",
    "default_dt",
    "mesh_info",
    "run_convergence",
    "run_energy",
    "run_single",
]
