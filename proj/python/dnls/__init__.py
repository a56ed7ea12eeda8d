"""Python bindings for the DNLS soliton toolkit."""

from ._core import (
    DnlsError,
    bt_forward,
    conserved,
    default_config,
    evolve,
    find_eigenvalue,
    grid,
    orbital_distance,
    run_pipeline,
    soliton,
    zero_curvature_residual,
)

__all__ = [
    "DnlsError",
    "bt_forward",
    "conserved",
    "default_config",
    "evolve",
    "find_eigenvalue",
    "grid",
    "orbital_distance",
    "run_pipeline",
    "soliton",
    "zero_curvature_residual",
]
