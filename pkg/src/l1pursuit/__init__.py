"""Basis pursuit (min ||x||_1 s.t. Ax = b) via inconsistent alternating projections.

The package bundles the solver family (expanding-ball alternating
projections, its binary-search variant, an infeasible-point subgradient
baseline), the heuristic optimality check, synthetic instance generation,
MatrixMarket/MPS file tooling, and a benchmark harness with performance
profiles.
"""

from .kernels import SpdSolver, SpdSolverError, matvec
from .projections import AffineProjector, L1Ball, l1_projection_oracle, project_affine, project_l1_ball
from .map_engine import MapConfig, MapOutcome, MapStatus, run_map
from .solvers import (
    HocFailure,
    HocOutcome,
    SolveResult,
    SolveStatus,
    SolverError,
    SolverOptions,
    bpmap_bin_solve,
    bpmap_solve,
    dual_lower_bound,
    hoc_check,
    hoc_trigger_policy,
    isal1_solve,
    solve_named,
    SOLVER_NAMES,
)
from .instances import (
    BpInstance,
    ErcResult,
    GenSpec,
    InfeasibleInstanceError,
    InstanceFormatError,
    LpSolution,
    check_erc,
    export_lp,
    generate,
    lp_oracle,
    read_instance,
    read_lp_export,
    write_instance,
)
from .bench import BenchRecord, PerfProfile, emit_profile_plot, performance_profile, run_suite

__version__ = "0.1.0"

__all__ = [
    "AffineProjector",
    "BenchRecord",
    "BpInstance",
    "ErcResult",
    "GenSpec",
    "HocFailure",
    "HocOutcome",
    "InfeasibleInstanceError",
    "InstanceFormatError",
    "L1Ball",
    "LpSolution",
    "MapConfig",
    "MapOutcome",
    "MapStatus",
    "PerfProfile",
    "SOLVER_NAMES",
    "SolveResult",
    "SolveStatus",
    "SolverError",
    "SolverOptions",
    "SpdSolver",
    "SpdSolverError",
    "bpmap_bin_solve",
    "bpmap_solve",
    "check_erc",
    "dual_lower_bound",
    "emit_profile_plot",
    "export_lp",
    "generate",
    "hoc_check",
    "hoc_trigger_policy",
    "isal1_solve",
    "l1_projection_oracle",
    "lp_oracle",
    "matvec",
    "performance_profile",
    "project_affine",
    "project_l1_ball",
    "read_instance",
    "read_lp_export",
    "run_map",
    "run_suite",
    "solve_named",
    "write_instance",
]
