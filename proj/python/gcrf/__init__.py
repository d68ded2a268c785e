"""Pairwise CRF inference with hard same-label constraints."""

from ._core import (
    bhattacharyya,
    brute_force,
    build_constraint_sets,
    compute_metrics,
    euclidean_cluster,
    generate_scene,
    lbp,
    objective,
    solve,
    solve_constrained,
)

__all__ = [
    "bhattacharyya",
    "brute_force",
    "build_constraint_sets",
    "compute_metrics",
    "euclidean_cluster",
    "generate_scene",
    "lbp",
    "objective",
    "solve",
    "solve_constrained",
]
