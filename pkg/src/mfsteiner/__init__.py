"""Steiner trees and first-passage ball growth on the complete graph with
i.i.d. Exp(1) edge weights.

The package computes exact Steiner weights, worst-case weights over free
terminal choices, the staged ball-growth upper-bound construction with its
stage-time laws, and the partition/coupling machinery behind the matching
lower bound, plus a Monte Carlo harness that measures how the normalized
weights n*w/ln n approach their limit constants.
"""

from .ballgrow import (
    BallGrowthOutcome,
    BallGrowthTrace,
    ball_growth_tree,
    c_kn,
    grow_annulus,
    grow_ball,
    mgf_exact,
    simulate_stage_times,
)
from .errors import CapabilityError, ConfigError, InfeasibleSizeError
from .harness import (
    ExperimentConfig,
    ExperimentReport,
    compare_ballgrow_exact,
    emit_report,
    limit_constant,
    run_experiment,
)
from .instance import Instance, Seed, gen_instance, sample_exp
from .kernels import get_backend
from .maximal import diameter, eccentricity, w_max
from .steiner import (
    DistanceMap,
    SteinerResult,
    mst,
    shortest_paths,
    steiner_bruteforce,
    steiner_exact,
)
from .theory import (
    CouplingSpec,
    Partition,
    apply_coupling,
    check_f_conditional_law,
    check_f_tail_bound,
    coupling_law_check,
    f_transform,
    lemma2_bound,
    subset_intersection_empty_freq,
    u_minima,
)

__version__ = "0.1.0"

__all__ = [
    "BallGrowthOutcome",
    "BallGrowthTrace",
    "CapabilityError",
    "ConfigError",
    "CouplingSpec",
    "DistanceMap",
    "ExperimentConfig",
    "ExperimentReport",
    "InfeasibleSizeError",
    "Instance",
    "Partition",
    "Seed",
    "SteinerResult",
    "apply_coupling",
    "ball_growth_tree",
    "c_kn",
    "check_f_conditional_law",
    "check_f_tail_bound",
    "compare_ballgrow_exact",
    "coupling_law_check",
    "diameter",
    "eccentricity",
    "emit_report",
    "f_transform",
    "gen_instance",
    "get_backend",
    "grow_annulus",
    "grow_ball",
    "lemma2_bound",
    "limit_constant",
    "mgf_exact",
    "mst",
    "run_experiment",
    "sample_exp",
    "shortest_paths",
    "simulate_stage_times",
    "steiner_bruteforce",
    "steiner_exact",
    "subset_intersection_empty_freq",
    "u_minima",
    "w_max",
]
