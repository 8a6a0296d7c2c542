"""Adaptive space-time least-squares finite elements for parabolic problems."""

from ._stfosls import (
    InvariantError,
    Mesh,
    SolverError,
    builtin_case_names,
    mark_doerfler,
    mark_maximum,
    run_case,
    triangle_quadrature,
    uniform_mesh,
    verify,
    verify_marking_property,
)

__all__ = [
    "InvariantError",
    "Mesh",
    "SolverError",
    "builtin_case_names",
    "mark_doerfler",
    "mark_maximum",
    "run_case",
    "triangle_quadrature",
    "uniform_mesh",
    "verify",
    "verify_marking_property",
]
