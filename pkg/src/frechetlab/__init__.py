"""Fréchet-distance algorithms, free-space map, curve-pointset matching."""
from .applications import (
    GeometricDag,
    closed_frechet_optimize,
    closed_match,
    dag_match,
    max_walk,
    min_walk,
    partial_match,
)
from .classic import (
    compute_frechet,
    compute_weak_frechet,
    decide_frechet,
    decide_weak_frechet,
    discrete_frechet,
)
from .cpm import CpmInstance, cpm_decide, cpm_optimize, cpm_reconstruct, reach_pointers, verify_feasible
from .fsmap import ContractViolation, build_free_space_map
from .kernels import BACKEND
from .reduction import SatFormula, build_assignment_curve, reduce_3sat
from .speed import SpeedProfiles, compute_speed_frechet, decide_speed_fast, decide_speed_simple

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ContractViolation",
    "CpmInstance",
    "GeometricDag",
    "SatFormula",
    "SpeedProfiles",
    "build_assignment_curve",
    "build_free_space_map",
    "closed_frechet_optimize",
    "closed_match",
    "compute_frechet",
    "compute_speed_frechet",
    "compute_weak_frechet",
    "cpm_decide",
    "cpm_optimize",
    "cpm_reconstruct",
    "dag_match",
    "decide_frechet",
    "decide_speed_fast",
    "decide_speed_simple",
    "decide_weak_frechet",
    "discrete_frechet",
    "max_walk",
    "min_walk",
    "partial_match",
    "reach_pointers",
    "reduce_3sat",
    "verify_feasible",
]
