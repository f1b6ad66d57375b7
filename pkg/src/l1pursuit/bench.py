"""Batch benchmark runner and Dolan-More performance profiles.

``run_suite`` executes a full (instance x solver) grid with per-run
isolation; ``performance_profile`` turns the records into per-solver step
curves of time ratios; ``emit_profile_plot`` renders the curves to an SVG
(log2 ratio axis) next to a CSV of the step points.  The CSV is the
canonical artifact, the SVG is cosmetic.
"""

from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from matplotlib.figure import Figure

from .instances import BpInstance
from .solvers import SOLVER_NAMES, SolveStatus, SolverOptions, solve_named

# Runs whose time is within this relative slack of the per-problem best
# count as ties at ratio exactly 1.
TIE_REL_TOL = 1e-9

SUCCESS_NAMES = frozenset({SolveStatus.OPTIMAL.value, SolveStatus.HOC_OPTIMAL.value})

RECORD_FIELDS = (
    "instance", "solver", "status", "time_s", "objective", "residual",
    "outer_iters", "inner_iters",
)


@dataclass(frozen=True)
class BenchRecord:
    instance: str
    solver: str
    status: str
    time_s: float
    objective: float
    residual: float
    outer_iters: int
    inner_iters: int

    @property
    def solved(self) -> bool:
        return self.status in SUCCESS_NAMES


def _run_cell(instance: BpInstance, solver: str, opts: SolverOptions) -> BenchRecord:
    started = time.perf_counter()
    try:
        result = solve_named(solver, instance, opts)
    except Exception:
        # Isolate per-run failures; they count against the time budget.
        return BenchRecord(
            instance=instance.label, solver=solver, status="Error",
            time_s=opts.time_limit, objective=math.nan, residual=math.nan,
            outer_iters=0, inner_iters=0,
        )
    elapsed = time.perf_counter() - started
    solved = result.status in (SolveStatus.OPTIMAL, SolveStatus.HOC_OPTIMAL)
    return BenchRecord(
        instance=instance.label, solver=solver, status=result.status.value,
        time_s=elapsed if solved else opts.time_limit,
        objective=result.objective, residual=result.residual,
        outer_iters=result.outer_iterations, inner_iters=result.inner_iterations,
    )


def run_suite(
    instances: list[BpInstance],
    solvers: list[str],
    opts: SolverOptions | None = None,
    workers: int = 1,
    on_record=None,
) -> list[BenchRecord]:
    """Run every solver on every instance and return records in canonical order.

    Each cell runs single-threaded; ``workers`` > 1 spreads cells over a
    thread pool (timings get noisier).  ``on_record`` is invoked as records
    complete, in completion order; the returned list is always sorted by
    (instance, solver) regardless.
    """
    if not instances or not solvers:
        raise ValueError("run_suite needs at least one instance and one solver")
    for name in solvers:
        if name not in SOLVER_NAMES:
            raise ValueError(f"unknown solver {name!r}; choose from {SOLVER_NAMES}")
    labels = [inst.label for inst in instances]
    if len(set(labels)) != len(labels):
        raise ValueError("instance labels must be unique within a suite")
    opts = opts or SolverOptions()
    cells = [(inst, solver) for inst in instances for solver in solvers]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_cell, inst, solver, opts) for inst, solver in cells]
            records = []
            for fut in futures:
                rec = fut.result()
                if on_record is not None:
                    on_record(rec)
                records.append(rec)
    else:
        records = []
        for inst, solver in cells:
            rec = _run_cell(inst, solver, opts)
            if on_record is not None:
                on_record(rec)
            records.append(rec)
    return sorted(records, key=lambda r: (r.instance, r.solver))


@dataclass(frozen=True)
class PerfProfile:
    """Per-solver step functions rho_s(tau) over ratios tau >= 1."""

    solvers: tuple[str, ...]
    problem_count: int
    curves: dict[str, list[tuple[float, float]]]


def performance_profile(records: list[BenchRecord]) -> PerfProfile:
    """Dolan-More profile: rho_s(tau) = fraction of problems with t_s <= tau * best.

    Requires a complete (instance x solver) grid.  Failed runs contribute an
    infinite ratio and are never counted as the per-problem best; ties
    within ``TIE_REL_TOL`` of the best all count as ratio 1.
    """
    if not records:
        raise ValueError("no records")
    instances = sorted({r.instance for r in records})
    solvers = sorted({r.solver for r in records})
    by_cell = {}
    for r in records:
        key = (r.instance, r.solver)
        if key in by_cell:
            raise ValueError(f"duplicate record for {key}")
        by_cell[key] = r
    missing = [
        (inst, sol) for inst in instances for sol in solvers if (inst, sol) not in by_cell
    ]
    if missing:
        raise ValueError(f"incomplete grid; missing cells: {missing}")

    ratios: dict[str, list[float]] = {s: [] for s in solvers}
    for inst in instances:
        solved_times = [
            by_cell[(inst, s)].time_s for s in solvers if by_cell[(inst, s)].solved
        ]
        best = min(solved_times) if solved_times else None
        for s in solvers:
            rec = by_cell[(inst, s)]
            if not rec.solved or best is None:
                ratios[s].append(math.inf)
            elif rec.time_s <= best * (1.0 + TIE_REL_TOL):
                ratios[s].append(1.0)
            else:
                ratios[s].append(rec.time_s / best)

    count = len(instances)
    curves: dict[str, list[tuple[float, float]]] = {}
    for s in solvers:
        finite = sorted(t for t in ratios[s] if math.isfinite(t))
        points: list[tuple[float, float]] = []
        solvedsofar = 0
        for tau in finite:
            solvedsofar += 1
            if points and points[-1][0] == tau:
                points[-1] = (tau, solvedsofar / count)
            else:
                points.append((tau, solvedsofar / count))
        if not points or points[0][0] > 1.0:
            points.insert(0, (1.0, 0.0))
        curves[s] = points
    return PerfProfile(solvers=tuple(solvers), problem_count=count, curves=curves)


def write_profile_csv(profile: PerfProfile, path) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(["solver", "tau", "rho"])
        for solver in profile.solvers:
            for tau, rho in profile.curves[solver]:
                writer.writerow([solver, repr(tau), repr(rho)])


def emit_profile_plot(profile: PerfProfile, path, csv_path=None) -> None:
    """Render the profile as an SVG step plot and write the companion CSV.

    ``csv_path`` defaults to the SVG path with a .csv suffix.
    """
    path = Path(path)
    csv_path = Path(csv_path) if csv_path is not None else path.with_suffix(".csv")
    write_profile_csv(profile, csv_path)

    taus_all = [t for c in profile.curves.values() for t, _ in c]
    tau_max = max([t for t in taus_all if math.isfinite(t)] + [2.0])

    fig = Figure(figsize=(6.4, 4.2))
    ax = fig.subplots()
    for solver in profile.solvers:
        points = profile.curves[solver]
        xs = [t for t, _ in points] + [tau_max * 1.05]
        ys = [r for _, r in points] + [points[-1][1]]
        ax.step(xs, ys, where="post", label=solver)
    ax.set_xscale("log", base=2)
    ax.set_xlim(1.0, tau_max * 1.05)
    ax.set_ylim(0.0, 1.05)
    ax.set_xlabel("performance ratio (log2 scale)")
    ax.set_ylabel("fraction of problems solved")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})


def write_records_csv(records: list[BenchRecord], path) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(RECORD_FIELDS)
        for r in records:
            writer.writerow([
                r.instance, r.solver, r.status, repr(r.time_s),
                repr(r.objective), repr(r.residual), r.outer_iters, r.inner_iters,
            ])


def read_records_csv(path) -> list[BenchRecord]:
    records = []
    with open(path, "r", newline="", encoding="ascii") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RECORD_FIELDS:
            raise ValueError(f"{path}: unexpected records header {reader.fieldnames}")
        for row in reader:
            records.append(BenchRecord(
                instance=row["instance"], solver=row["solver"], status=row["status"],
                time_s=float(row["time_s"]), objective=float(row["objective"]),
                residual=float(row["residual"]), outer_iters=int(row["outer_iters"]),
                inner_iters=int(row["inner_iters"]),
            ))
    return records
