"""The four top-level solvers sharing one result schema.

* ``bpmap_solve``: outer loop that grows the l1-ball radius by the norm of
  the displacement vector of each best approximation pair, terminating when
  the inner alternating projections report a point in the intersection.
* ``hoc_check``: the heuristic optimality check; attempts a dual
  certificate from the sign/support pattern of an iterate.
* ``bpmap_bin_solve``: binary search on the radius with the inner loop used
  as an emptiness test.
* ``isal1_solve``: infeasible-point subgradient baseline with projected
  Polyak-type steps.
"""

from __future__ import annotations

import csv
import dataclasses
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
import scipy.sparse.linalg

from .instances import BpInstance
from .kernels import SpdSolverError, is_sparse, rmatvec
from .map_engine import MapConfig, MapStatus, run_map
from .projections import AffineProjector, L1Ball, project_affine, project_l1_ball

# Subgradient steps below this relative size make no further headway.
ISAL1_STEP_FLOOR = 1e-13

# Halve the subgradient step weight after this many iterations without
# improving the best objective.
ISAL1_STAGNATION_WINDOW = 100

# LSQR thresholds for the sparse HOC solves (~sqrt machine epsilon).
HOC_LSQR_TOL = 1.49e-8


class SolveStatus(Enum):
    OPTIMAL = "Optimal"
    HOC_OPTIMAL = "HocOptimal"
    STALLED = "Stalled"
    ITER_LIMIT = "IterLimit"
    TIME_LIMIT = "TimeLimit"


SUCCESS_STATUSES = frozenset({SolveStatus.OPTIMAL, SolveStatus.HOC_OPTIMAL})


class HocFailure(Enum):
    SUPPORT_EMPTY = "support-empty"
    DUAL_INFEASIBLE = "dual-infeasible"
    PRIMAL_INCONSISTENT = "primal-inconsistent"
    GAP_TOO_LARGE = "gap-too-large"
    LINEAR_SOLVER_FAILED = "linear-solver-failed"


class SolverError(RuntimeError):
    """A projection backend failed mid-solve; carries the partial trajectory."""

    def __init__(self, message: str, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory or []


@dataclass(frozen=True)
class SolverOptions:
    map_config: MapConfig = field(default_factory=MapConfig)
    outer_cap: int = 100_000
    time_limit: float = 3600.0
    hoc_enabled: bool = True
    support_tol_abs: float = 1e-12
    support_tol_rel: float = 1e-10
    bin_alpha: float = 0.9
    bin_gap_tol: float = 1e-6
    hoc_tol: float = 1e-6

    def __post_init__(self):
        if not 0.0 < self.bin_alpha < 1.0:
            raise ValueError("bin_alpha must lie in (0, 1)")
        for name in ("support_tol_abs", "support_tol_rel", "bin_gap_tol", "hoc_tol", "time_limit"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be > 0")
        if self.outer_cap < 1:
            raise ValueError("outer_cap must be >= 1")


@dataclass
class TrajectoryPoint:
    k: int
    r: float
    R: float | None
    norm_d: float
    inner_iters: int
    elapsed_s: float
    bracket_width: float | None = None
    residual: float | None = None


@dataclass
class OuterState:
    """Bookkeeping for one outer iteration of the radius-growing loop."""

    k: int
    r: float
    z: np.ndarray
    x: np.ndarray | None = None
    d: np.ndarray | None = None
    trajectory: list[TrajectoryPoint] = field(default_factory=list)


@dataclass
class SolveResult:
    x: np.ndarray
    status: SolveStatus
    objective: float
    residual: float
    outer_iterations: int
    inner_iterations: int
    affine_projections: int
    ball_projections: int
    hoc_calls: int
    wall_time: float
    certificate: np.ndarray | None = None
    gap: float | None = None
    trajectory: list[TrajectoryPoint] = field(default_factory=list)
    final_gap: float | None = None
    bracket: tuple[float, float] | None = None

    @property
    def solved(self) -> bool:
        return self.status in SUCCESS_STATUSES


def trajectory_to_csv(trajectory: list[TrajectoryPoint], path) -> None:
    """Write a trajectory as CSV: k, r_k, R_k (empty unless BIN), norm_d, inner_iters, elapsed_s."""
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "r_k", "R_k", "norm_d", "inner_iters", "elapsed_s"])
        for p in trajectory:
            writer.writerow([
                p.k,
                repr(p.r),
                "" if p.R is None else repr(p.R),
                repr(p.norm_d),
                p.inner_iters,
                repr(p.elapsed_s),
            ])


def support_indices(x: np.ndarray, opts: SolverOptions) -> np.ndarray:
    """Indices with |x_i| above max(support_tol_abs, support_tol_rel * ||x||_inf)."""
    x = np.asarray(x, dtype=float)
    scale = float(np.abs(x).max(initial=0.0))
    threshold = max(opts.support_tol_abs, opts.support_tol_rel * scale)
    return np.nonzero(np.abs(x) > threshold)[0]


def hoc_trigger_policy(previous_support, current_support) -> bool:
    """True iff both supports are the same nonempty index set."""
    prev = frozenset(int(i) for i in previous_support)
    cur = frozenset(int(i) for i in current_support)
    return bool(prev) and prev == cur


def dual_lower_bound(instance: BpInstance, w: np.ndarray) -> float:
    """Weak-duality bound  b'w / ||A'w||_inf  on the optimal value (-inf if A'w = 0)."""
    w = np.asarray(w, dtype=float)
    atw = rmatvec(instance.A, w)
    denom = float(np.abs(atw).max(initial=0.0))
    if denom == 0.0:
        return float("-inf")
    return float(instance.b @ w) / denom


@dataclass
class HocOutcome:
    success: bool
    xhat: np.ndarray | None = None
    what: np.ndarray | None = None
    gap: float | None = None
    reason: HocFailure | None = None


def _hoc_failure(reason: HocFailure, what: np.ndarray | None = None) -> HocOutcome:
    return HocOutcome(success=False, reason=reason, what=what)


def hoc_check(instance: BpInstance, x: np.ndarray, opts: SolverOptions | None = None) -> HocOutcome:
    """Heuristic optimality check on the support/sign pattern of ``x``.

    Solves ``A_S' w = sign(x_S)`` in the least-squares sense, requires
    ``||A' w||_inf <= 1 + tol``, rebuilds the candidate supported on S from
    ``A_S xhat_S = b``, and accepts when the relative duality gap
    ``(||xhat||_1 - b'w) / ||xhat||_1`` vanishes to tolerance.  A success is
    a genuine optimality certificate up to the tolerance, however the
    candidate support was produced.
    """
    opts = opts or SolverOptions()
    A, b = instance.A, instance.b
    if not np.any(b):
        raise ValueError("hoc_check requires b != 0")
    x = np.asarray(x, dtype=float)
    S = support_indices(x, opts)
    if S.size == 0:
        return _hoc_failure(HocFailure.SUPPORT_EMPTY)
    sgn = np.sign(x[S])

    A_S = A[:, S]
    try:
        if is_sparse(A):
            what = scipy.sparse.linalg.lsqr(
                A_S.T, sgn, atol=HOC_LSQR_TOL, btol=HOC_LSQR_TOL
            )[0]
        else:
            what = np.linalg.lstsq(A_S.T, sgn, rcond=None)[0]
    except (np.linalg.LinAlgError, ValueError):
        return _hoc_failure(HocFailure.LINEAR_SOLVER_FAILED)
    if not np.all(np.isfinite(what)):
        return _hoc_failure(HocFailure.LINEAR_SOLVER_FAILED)

    dual_norm = float(np.abs(rmatvec(A, what)).max(initial=0.0))
    if dual_norm > 1.0 + opts.hoc_tol:
        return _hoc_failure(HocFailure.DUAL_INFEASIBLE, what=what)

    try:
        if is_sparse(A):
            xhat_S = scipy.sparse.linalg.lsqr(
                A_S, b, atol=HOC_LSQR_TOL, btol=HOC_LSQR_TOL
            )[0]
        else:
            xhat_S = np.linalg.lstsq(A_S, b, rcond=None)[0]
    except (np.linalg.LinAlgError, ValueError):
        return _hoc_failure(HocFailure.LINEAR_SOLVER_FAILED, what=what)
    if not np.all(np.isfinite(xhat_S)):
        return _hoc_failure(HocFailure.LINEAR_SOLVER_FAILED, what=what)
    primal_resid = float(np.linalg.norm(A_S @ xhat_S - b))
    if primal_resid > opts.hoc_tol * (1.0 + np.linalg.norm(b)):
        return _hoc_failure(HocFailure.PRIMAL_INCONSISTENT, what=what)

    xhat = np.zeros(instance.n)
    xhat[S] = xhat_S
    objective = float(np.abs(xhat_S).sum())
    if objective == 0.0:
        return _hoc_failure(HocFailure.GAP_TOO_LARGE, what=what)
    gap = (objective - float(b @ what)) / objective
    if abs(gap) > opts.hoc_tol:
        return _hoc_failure(HocFailure.GAP_TOO_LARGE, what=what)
    return HocOutcome(success=True, xhat=xhat, what=what, gap=gap)


def _support_key(x: np.ndarray, S: np.ndarray) -> bytes:
    """HOC outcomes depend only on the support and its sign pattern."""
    return S.tobytes() + np.sign(x[S]).tobytes()


def _hoc_support_sweep(
    instance: BpInstance,
    x: np.ndarray,
    opts: SolverOptions,
    counters: "_Counters",
    tried: set[bytes],
) -> tuple[HocOutcome | None, float]:
    """Try certificates for candidates built from the largest entries of ``x``.

    Truncating to the top j coordinates (j = 1..m) deduces candidate
    supports a noisy iterate cannot express through thresholds alone.
    Returns the first success (or None) and the best weak-duality bound
    seen among the failed attempts' dual vectors.
    """
    order = np.argsort(-np.abs(x), kind="stable")
    phi = float("-inf")
    limit = min(instance.m, int(np.count_nonzero(x)))
    for j in range(1, limit + 1):
        S = np.sort(order[:j])
        key = _support_key(x, S)
        if key in tried:
            continue
        tried.add(key)
        candidate = np.zeros_like(x)
        candidate[S] = x[S]
        counters.hoc += 1
        outcome = hoc_check(instance, candidate, opts)
        if outcome.success:
            return outcome, phi
        if outcome.what is not None:
            phi = max(phi, dual_lower_bound(instance, outcome.what))
    return None, phi


def _residual(instance: BpInstance, x: np.ndarray) -> float:
    return float(np.linalg.norm(instance.A @ x - instance.b))


def _zero_solution_result(instance: BpInstance, t0: float) -> SolveResult:
    x = np.zeros(instance.n)
    return SolveResult(
        x=x, status=SolveStatus.OPTIMAL, objective=0.0, residual=_residual(instance, x),
        outer_iterations=0, inner_iterations=0, affine_projections=0, ball_projections=0,
        hoc_calls=0, wall_time=time.perf_counter() - t0,
    )


class _Counters:
    def __init__(self):
        self.inner = 0
        self.affine = 0
        self.ball = 0
        self.hoc = 0

    def absorb(self, outcome):
        self.inner += outcome.inner_iterations
        self.affine += outcome.affine_projections
        self.ball += outcome.ball_projections


def _finish(instance, x, status, counters, outer, t0, trajectory, certificate=None,
            gap=None, final_gap=None, bracket=None) -> SolveResult:
    x = np.asarray(x, dtype=float)
    return SolveResult(
        x=x, status=status, objective=float(np.abs(x).sum()), residual=_residual(instance, x),
        outer_iterations=outer, inner_iterations=counters.inner,
        affine_projections=counters.affine, ball_projections=counters.ball,
        hoc_calls=counters.hoc, wall_time=time.perf_counter() - t0,
        certificate=certificate, gap=gap, trajectory=trajectory,
        final_gap=final_gap, bracket=bracket,
    )


def bpmap_solve(
    instance: BpInstance,
    opts: SolverOptions | None = None,
    observer=None,
) -> SolveResult:
    """Expanding-ball alternating projections (radius grows by ||d^k||_2).

    Starts from r_0 = 0, z^0 = 0.  Each outer step projects z^k onto the
    affine set, adds the displacement norm to the radius, and reruns the
    inner loop on the enlarged ball warm-started at z^k.  Declares the
    solution as soon as the inner loop reports an intersection point; with
    HOC enabled, a stabilized support of the ball-side iterate z^k (whose
    zeros are exact, unlike the affine projections) triggers the
    certificate attempt first, and an exact certificate wins over
    tolerance-level feasibility.  ``observer``, if given, receives the
    :class:`OuterState` after each displacement computation.
    """
    opts = opts or SolverOptions()
    t0 = time.perf_counter()
    deadline = t0 + opts.time_limit
    instance.validate()
    if not np.any(instance.b):
        return _zero_solution_result(instance, t0)

    counters = _Counters()
    state = OuterState(k=0, r=0.0, z=np.zeros(instance.n))
    try:
        proj = AffineProjector(instance.A, instance.b)
        prev_support = None
        failed_key = None
        # Every x^k is feasible, so min ||x^k||_1 upper-bounds the optimum;
        # clipping the radius there neutralizes the overshoot a stalled
        # inner run's gap overestimate would otherwise inject (in exact
        # arithmetic the clip never binds).
        upper = float("inf")
        for k in range(opts.outer_cap):
            state.k = k
            x = project_affine(proj, state.z)
            counters.affine += 1
            state.x = x
            state.d = state.z - x
            norm_d = float(np.linalg.norm(state.d))
            upper = min(upper, float(np.abs(x).sum()))
            if observer is not None:
                observer(state)

            if opts.hoc_enabled:
                sup = support_indices(state.z, opts)
                if prev_support is not None and hoc_trigger_policy(prev_support, sup):
                    key = _support_key(state.z, sup)
                    if key != failed_key:
                        counters.hoc += 1
                        outcome = hoc_check(instance, state.z, opts)
                        if outcome.success:
                            state.trajectory.append(TrajectoryPoint(
                                k, state.r, None, norm_d, 0, time.perf_counter() - t0))
                            return _finish(
                                instance, outcome.xhat, SolveStatus.HOC_OPTIMAL, counters,
                                k + 1, t0, state.trajectory,
                                certificate=outcome.what, gap=outcome.gap,
                            )
                        failed_key = key
                prev_support = sup

            r_next = min(state.r + norm_d, upper)
            if r_next < state.r:
                r_next = state.r
            grew = r_next > state.r
            mo = run_map(L1Ball(r_next), proj, state.z, opts.map_config, deadline=deadline)
            counters.absorb(mo)
            state.trajectory.append(TrajectoryPoint(
                k, state.r, None, norm_d, mo.inner_iterations, time.perf_counter() - t0))
            state.r = r_next
            if mo.status is MapStatus.INTERSECTING:
                return _finish(instance, mo.x, SolveStatus.OPTIMAL, counters,
                               k + 1, t0, state.trajectory, final_gap=mo.gap)
            if mo.status is MapStatus.EXHAUSTED:
                status = (SolveStatus.TIME_LIMIT if time.perf_counter() > deadline
                          else SolveStatus.STALLED)
                return _finish(instance, x, status, counters, k + 1, t0,
                               state.trajectory, final_gap=mo.gap)
            if not grew:
                # Radius pinned at the feasible upper bound yet the inner
                # loop still stalls: repeating the identical run cannot help.
                return _finish(instance, x, SolveStatus.STALLED, counters, k + 1, t0,
                               state.trajectory, final_gap=mo.gap)
            state.z = mo.z
            if time.perf_counter() > deadline:
                return _finish(instance, x, SolveStatus.TIME_LIMIT, counters,
                               k + 1, t0, state.trajectory, final_gap=mo.gap)
        return _finish(instance, state.x, SolveStatus.ITER_LIMIT, counters,
                       opts.outer_cap, t0, state.trajectory)
    except SpdSolverError as exc:
        raise SolverError(f"projection backend failed: {exc}", state.trajectory) from exc


def bpmap_bin_solve(instance: BpInstance, opts: SolverOptions | None = None) -> SolveResult:
    """Binary search on the radius, with the inner loop as emptiness test.

    Maintains a bracket r_k < optimum <= R_k.  The test radius is
    ``alpha * r_k + (1 - alpha) * R_k``; a best approximation pair moves the
    lower end up, an intersection point moves the upper end down and is
    cached as the incumbent.  The bracket state is kept as (low, width) with
    multiplicative width updates, so logged shrink factors are exactly alpha
    or 1 - alpha.  Success once the width drops below the gap tolerance in
    absolute or relative terms.  HOC candidates are the ball-side points of
    each inner run, whose zeros are exact.
    """
    opts = opts or SolverOptions()
    t0 = time.perf_counter()
    deadline = t0 + opts.time_limit
    instance.validate()
    if not np.any(instance.b):
        return _zero_solution_result(instance, t0)

    alpha = opts.bin_alpha
    counters = _Counters()
    trajectory: list[TrajectoryPoint] = []
    try:
        proj = AffineProjector(instance.A, instance.b)
        x0 = project_affine(proj, np.zeros(instance.n))
        counters.affine += 1
        r = 0.0
        width = float(np.abs(x0).sum())
        z = np.zeros(instance.n)
        incumbent = None
        incumbent_gap = None
        last_best_x = None
        prev_support = None
        failed_key = None

        def best_available():
            if incumbent is not None:
                return incumbent
            if last_best_x is not None:
                return last_best_x
            return x0

        for k in range(opts.outer_cap):
            R = r + width
            if width <= opts.bin_gap_tol or width <= opts.bin_gap_tol * R:
                if incumbent is not None:
                    return _finish(instance, incumbent, SolveStatus.OPTIMAL, counters, k, t0,
                                   trajectory, final_gap=incumbent_gap, bracket=(r, R))
                if last_best_x is not None:
                    return _finish(instance, last_best_x, SolveStatus.STALLED, counters, k, t0,
                                   trajectory, bracket=(r, R))
                return _finish(instance, x0, SolveStatus.OPTIMAL, counters, k, t0,
                               trajectory, bracket=(r, R))
            r_test = r + (1.0 - alpha) * width
            ball = L1Ball(r_test)
            z_start = project_l1_ball(ball, z)
            counters.ball += 1
            mo = run_map(ball, proj, z_start, opts.map_config, deadline=deadline)
            counters.absorb(mo)
            trajectory.append(TrajectoryPoint(
                k, r, R, mo.gap, mo.inner_iterations, time.perf_counter() - t0,
                bracket_width=width))
            if mo.status is MapStatus.EXHAUSTED:
                status = (SolveStatus.TIME_LIMIT if time.perf_counter() > deadline
                          else SolveStatus.STALLED)
                return _finish(instance, best_available(), status, counters, k + 1, t0,
                               trajectory, bracket=(r, r + width))
            if mo.status is MapStatus.INTERSECTING:
                incumbent = mo.x
                incumbent_gap = mo.gap
                width = (1.0 - alpha) * width
            else:
                last_best_x = mo.x
                r = r_test
                width = alpha * width
            z = mo.z

            if opts.hoc_enabled:
                sup = support_indices(mo.z, opts)
                if prev_support is not None and hoc_trigger_policy(prev_support, sup):
                    key = _support_key(mo.z, sup)
                    if key != failed_key:
                        counters.hoc += 1
                        outcome = hoc_check(instance, mo.z, opts)
                        if outcome.success:
                            return _finish(
                                instance, outcome.xhat, SolveStatus.HOC_OPTIMAL, counters,
                                k + 1, t0, trajectory, certificate=outcome.what,
                                gap=outcome.gap, bracket=(r, r + width),
                            )
                        failed_key = key
                prev_support = sup

            if time.perf_counter() > deadline:
                return _finish(instance, best_available(), SolveStatus.TIME_LIMIT, counters,
                               k + 1, t0, trajectory, bracket=(r, r + width))
        return _finish(instance, best_available(), SolveStatus.ITER_LIMIT, counters,
                       opts.outer_cap, t0, trajectory, bracket=(r, r + width))
    except SpdSolverError as exc:
        raise SolverError(f"projection backend failed: {exc}", trajectory) from exc


def isal1_solve(instance: BpInstance, opts: SolverOptions | None = None) -> SolveResult:
    """Projected subgradient baseline with a Polyak-type step.

    Iterates ``x <- P_M(x - lambda ((||x||_1 - phi) / ||h||^2) h)`` with
    ``h = sign(x)``.  The lower bound ``phi`` starts at zero and is
    refreshed from the weak-duality bound of every dual vector HOC
    produces.  The weight ``lambda`` starts at one and halves whenever the
    best objective stops improving, giving the vanishing step sizes the
    iteration needs once the lower bound saturates below the optimum.
    Subgradient iterates are numerically dense, so besides the
    support-stabilization trigger the certificate attempt is rate-limited
    to a doubling schedule of iterations.  Stops on HOC success, on the
    step floor, or on the caps; returns the best iterate seen.  Every
    iterate after the initial projection stays on the affine set.
    """
    opts = opts or SolverOptions()
    t0 = time.perf_counter()
    deadline = t0 + opts.time_limit
    instance.validate()
    if not np.any(instance.b):
        return _zero_solution_result(instance, t0)

    counters = _Counters()
    trajectory: list[TrajectoryPoint] = []
    try:
        proj = AffineProjector(instance.A, instance.b)
        x = project_affine(proj, np.zeros(instance.n))
        counters.affine += 1
        phi = 0.0
        lam = 1.0
        best_obj = float("inf")
        best_x = x
        since_improved = 0
        prev_support = None
        failed_key = None
        next_scheduled = 1
        swept: set[bytes] = set()
        for k in range(opts.outer_cap):
            objective = float(np.abs(x).sum())
            if objective < best_obj:
                best_obj = objective
                best_x = x
                since_improved = 0
            else:
                since_improved += 1
                if since_improved >= ISAL1_STAGNATION_WINDOW:
                    lam *= 0.5
                    since_improved = 0
                    # A settled iterate is worth a sweep of truncated candidates.
                    if opts.hoc_enabled:
                        outcome, swept_phi = _hoc_support_sweep(
                            instance, best_x, opts, counters, swept)
                        if outcome is not None:
                            return _finish(
                                instance, outcome.xhat, SolveStatus.HOC_OPTIMAL, counters,
                                k + 1, t0, trajectory,
                                certificate=outcome.what, gap=outcome.gap,
                            )
                        phi = max(phi, swept_phi)

            if opts.hoc_enabled:
                sup = support_indices(x, opts)
                # Supports above m can never be a vertex solution's pattern,
                # so the stabilization trigger only fires below that size.
                triggered = (sup.size <= instance.m and prev_support is not None
                             and hoc_trigger_policy(prev_support, sup))
                scheduled = k + 1 >= next_scheduled
                key = _support_key(x, sup) if sup.size else None
                if key is not None and key != failed_key and (scheduled or triggered):
                    if scheduled:
                        next_scheduled = 2 * (k + 1)
                    counters.hoc += 1
                    outcome = hoc_check(instance, x, opts)
                    if outcome.success:
                        return _finish(
                            instance, outcome.xhat, SolveStatus.HOC_OPTIMAL, counters,
                            k + 1, t0, trajectory, certificate=outcome.what, gap=outcome.gap,
                        )
                    failed_key = key
                    if outcome.what is not None:
                        phi = max(phi, dual_lower_bound(instance, outcome.what))
                prev_support = sup

            h = np.sign(x)
            h_sq = float(h @ h)
            if h_sq == 0.0 or lam * (objective - phi) <= ISAL1_STEP_FLOOR * (1.0 + objective):
                return _finish(instance, best_x, SolveStatus.STALLED, counters, k, t0, trajectory)
            step = lam * (objective - phi) / h_sq
            x_next = project_affine(proj, x - step * h)
            counters.affine += 1
            trajectory.append(TrajectoryPoint(
                k, objective, None, float(np.linalg.norm(x_next - x)), 0,
                time.perf_counter() - t0, residual=_residual(instance, x_next)))
            x = x_next
            if time.perf_counter() > deadline:
                return _finish(instance, best_x, SolveStatus.TIME_LIMIT, counters,
                               k + 1, t0, trajectory)
        return _finish(instance, best_x, SolveStatus.ITER_LIMIT, counters,
                       opts.outer_cap, t0, trajectory)
    except SpdSolverError as exc:
        raise SolverError(f"projection backend failed: {exc}", trajectory) from exc


def _with_hoc(opts: SolverOptions | None, enabled: bool) -> SolverOptions:
    opts = opts or SolverOptions()
    if opts.hoc_enabled == enabled:
        return opts
    return dataclasses.replace(opts, hoc_enabled=enabled)


SOLVER_NAMES = ("bpmap", "bpmap-hoc", "bpmap-bin", "bpmap-hoc-bin", "isal1")


def solve_named(name: str, instance: BpInstance, opts: SolverOptions | None = None) -> SolveResult:
    """Dispatch by benchmark solver name; the -hoc variants force HOC on, plain ones off."""
    if name == "bpmap":
        return bpmap_solve(instance, _with_hoc(opts, False))
    if name == "bpmap-hoc":
        return bpmap_solve(instance, _with_hoc(opts, True))
    if name == "bpmap-bin":
        return bpmap_bin_solve(instance, _with_hoc(opts, False))
    if name == "bpmap-hoc-bin":
        return bpmap_bin_solve(instance, _with_hoc(opts, True))
    if name == "isal1":
        return isal1_solve(instance, _with_hoc(opts, True))
    raise ValueError(f"unknown solver {name!r}; choose from {SOLVER_NAMES}")
