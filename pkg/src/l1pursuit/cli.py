"""Command-line front end: generate, solve, check, export-lp, bench, profile."""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click
import numpy as np

from . import bench as bench_mod
from .instances import (
    BpInstance,
    GenSpec,
    InstanceFormatError,
    check_erc,
    export_lp,
    generate as generate_instance,
    read_instance,
    read_mm,
    write_instance,
)
from .kernels import is_sparse
from .map_engine import MapConfig
from .solvers import (
    SolveStatus,
    SolverError,
    SolverOptions,
    hoc_check,
    solve_named,
    trajectory_to_csv,
)

WORKER_ENV = "L1PURSUIT_THREADS"


def _fmt(value: float) -> str:
    """All numeric output carries 9 significant digits."""
    return format(float(value), ".9g")


def _worker_cap(requested: int) -> int:
    cap = os.environ.get(WORKER_ENV)
    if cap is not None:
        try:
            requested = min(requested, max(1, int(cap)))
        except ValueError as exc:
            raise click.UsageError(f"{WORKER_ENV} must be an integer, got {cap!r}") from exc
    return max(1, requested)


@click.group()
@click.version_option(package_name="l1pursuit")
def main():
    """Basis-pursuit solvers built on inconsistent alternating projections."""


@main.command()
@click.option("--m", "m", type=int, required=True, help="Number of rows.")
@click.option("--n", "n", type=int, required=True, help="Number of columns.")
@click.option("--s", "s", type=int, required=True, help="Planted sparsity.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--dynrange", type=float, default=1.0, show_default=True,
              help="Dynamic-range exponent d; magnitudes are 10**U[0, d].")
@click.option("--label", type=str, default=None, help="Override the instance label.")
@click.option("-o", "--out", "out_dir", type=click.Path(path_type=Path), required=True,
              help="Instance directory to create.")
def generate(m, n, s, seed, dynrange, label, out_dir):
    """Generate a seeded Gaussian instance and write it to a directory."""
    try:
        spec = GenSpec(m=m, n=n, s=s, dynrange=dynrange, seed=seed)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    instance = generate_instance(spec)
    if label:
        instance.meta["label"] = label
    erc = check_erc(instance)
    instance.meta["erc_value"] = erc.value
    write_instance(instance, out_dir)
    click.echo(f"instance   {instance.label}")
    click.echo(f"size       m={m} n={n} s={s}")
    click.echo(f"erc_value  {_fmt(erc.value)} ({'holds' if erc.holds else 'violated'})")
    click.echo(f"written    {out_dir}")


def _solver_options(feas_tol, stall_tol, max_inner, outer_cap, time_limit, hoc,
                    alpha, bin_gap_tol, hoc_tol, support_tol_abs, support_tol_rel) -> SolverOptions:
    try:
        return SolverOptions(
            map_config=MapConfig(feas_tol=feas_tol, stall_tol=stall_tol, max_inner=max_inner),
            outer_cap=outer_cap, time_limit=time_limit, hoc_enabled=hoc,
            bin_alpha=alpha, bin_gap_tol=bin_gap_tol, hoc_tol=hoc_tol,
            support_tol_abs=support_tol_abs, support_tol_rel=support_tol_rel,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc


def _load_instance(path: Path) -> BpInstance:
    try:
        return read_instance(path)
    except InstanceFormatError as exc:
        raise click.ClickException(str(exc)) from exc


@main.command()
@click.argument("instance_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--solver", type=click.Choice(["bpmap", "bpmap-bin", "isal1"]),
              default="bpmap-bin", show_default=True)
@click.option("--hoc/--no-hoc", default=True, show_default=True,
              help="Enable the heuristic optimality check.")
@click.option("--feas-tol", type=float, default=1e-6, show_default=True)
@click.option("--stall-tol", type=float, default=1e-6, show_default=True)
@click.option("--max-inner", type=int, default=1_000_000, show_default=True)
@click.option("--outer-cap", type=int, default=100_000, show_default=True)
@click.option("--time-limit", type=float, default=3600.0, show_default=True)
@click.option("--alpha", type=float, default=0.9, show_default=True,
              help="Binary-search interpolation weight.")
@click.option("--bin-gap-tol", type=float, default=1e-6, show_default=True)
@click.option("--hoc-tol", type=float, default=1e-6, show_default=True)
@click.option("--support-tol-abs", type=float, default=1e-12, show_default=True)
@click.option("--support-tol-rel", type=float, default=1e-10, show_default=True)
@click.option("--trajectory", "trajectory_path", type=click.Path(path_type=Path), default=None,
              help="Write the outer-iteration log to this CSV file.")
@click.option("-v", "--verbose", count=True)
def solve(instance_dir, solver, hoc, feas_tol, stall_tol, max_inner, outer_cap,
          time_limit, alpha, bin_gap_tol, hoc_tol, support_tol_abs, support_tol_rel,
          trajectory_path, verbose):
    """Solve an instance directory; exit 0 iff a solution was certified or found."""
    instance = _load_instance(instance_dir)
    opts = _solver_options(feas_tol, stall_tol, max_inner, outer_cap, time_limit,
                           hoc, alpha, bin_gap_tol, hoc_tol, support_tol_abs, support_tol_rel)
    name = solver if not hoc or solver == "isal1" else {
        "bpmap": "bpmap-hoc", "bpmap-bin": "bpmap-hoc-bin"}[solver]
    if not hoc and solver == "isal1":
        raise click.UsageError("isal1 requires HOC; --no-hoc is not supported for it")
    try:
        result = solve_named(name, instance, opts)
    except SolverError as exc:
        raise click.ClickException(f"solver failed: {exc}") from exc
    click.echo(f"instance    {instance.label}")
    click.echo(f"solver      {name}")
    click.echo(f"status      {result.status.value}")
    click.echo(f"objective   {_fmt(result.objective)}")
    click.echo(f"residual    {_fmt(result.residual)}")
    click.echo(f"outer_iters {result.outer_iterations}")
    click.echo(f"inner_iters {result.inner_iterations}")
    click.echo(f"hoc_calls   {result.hoc_calls}")
    click.echo(f"time_s      {_fmt(result.wall_time)}")
    if result.gap is not None:
        click.echo(f"duality_gap {_fmt(result.gap)}")
    if result.bracket is not None:
        lo, hi = result.bracket
        click.echo(f"bracket     [{_fmt(lo)}, {_fmt(hi)}] width {_fmt(hi - lo)}")
    if verbose:
        for p in result.trajectory:
            r_col = f" R={_fmt(p.R)}" if p.R is not None else ""
            click.echo(f"  k={p.k} r={_fmt(p.r)}{r_col} norm_d={_fmt(p.norm_d)} "
                       f"inner={p.inner_iters} t={_fmt(p.elapsed_s)}")
    if trajectory_path is not None:
        trajectory_to_csv(result.trajectory, trajectory_path)
        click.echo(f"trajectory  {trajectory_path}")
    if result.status not in (SolveStatus.OPTIMAL, SolveStatus.HOC_OPTIMAL):
        sys.exit(1)


@main.command()
@click.argument("instance_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.argument("solution_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--hoc-tol", type=float, default=1e-6, show_default=True)
def check(instance_dir, solution_file, hoc_tol):
    """Run the optimality check on a solution vector (MatrixMarket array file)."""
    instance = _load_instance(instance_dir)
    try:
        x = read_mm(solution_file)
    except InstanceFormatError as exc:
        raise click.ClickException(str(exc)) from exc
    if is_sparse(x):
        x = x.toarray()
    x = np.asarray(x)
    if x.ndim == 2 and x.shape[1] == 1:
        x = x[:, 0]
    if x.shape != (instance.n,):
        raise click.ClickException(
            f"solution has shape {x.shape}, expected ({instance.n},)")
    try:
        outcome = hoc_check(instance, x, SolverOptions(hoc_tol=hoc_tol))
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    if outcome.success:
        click.echo(f"Success gap={_fmt(outcome.gap)}")
    else:
        click.echo(f"Failure({outcome.reason.value})")
        sys.exit(1)


@main.command("export-lp")
@click.argument("instance_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("-o", "--out", "out_path", type=click.Path(path_type=Path), required=True,
              help="MPS file to write.")
def export_lp_cmd(instance_dir, out_path):
    """Export the split-variable LP reformulation as a fixed-layout MPS file."""
    instance = _load_instance(instance_dir)
    export_lp(instance, out_path)
    click.echo(f"written    {out_path}")
    click.echo(f"columns    {2 * instance.n}")
    click.echo(f"rows       {instance.m}")


def _emit_profile_outputs(records, out_dir: Path):
    profile = bench_mod.performance_profile(records)
    bench_mod.write_records_csv(records, out_dir / "records.csv")
    bench_mod.emit_profile_plot(profile, out_dir / "profile.svg", out_dir / "profile.csv")
    click.echo(f"records    {out_dir / 'records.csv'}")
    click.echo(f"profile    {out_dir / 'profile.csv'}")
    click.echo(f"plot       {out_dir / 'profile.svg'}")


@main.command()
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("-o", "--out-dir", type=click.Path(path_type=Path), default=Path("bench-out"),
              show_default=True)
@click.option("--workers", type=int, default=1, show_default=True,
              help=f"Parallel cells; capped by ${WORKER_ENV}.")
@click.option("--time-limit", type=float, default=3600.0, show_default=True)
def bench(manifest, out_dir, workers, time_limit):
    """Run a benchmark manifest: JSON with "instances" (dirs) and "solvers" (names)."""
    with open(manifest, "r", encoding="utf-8") as fh:
        try:
            spec = json.load(fh)
        except json.JSONDecodeError as exc:
            raise click.ClickException(f"{manifest}: invalid JSON ({exc})") from exc
    inst_dirs = [Path(p) for p in spec.get("instances", [])]
    solver_names = list(spec.get("solvers", []))
    if not inst_dirs or not solver_names:
        raise click.UsageError(f"{manifest}: manifest needs nonempty 'instances' and 'solvers'")
    missing = [str(p) for p in inst_dirs if not (p / "A.mtx").is_file()]
    if missing:
        raise click.ClickException("missing instances: " + ", ".join(missing))
    instances = [_load_instance(p) for p in inst_dirs]
    opts = SolverOptions(time_limit=float(spec.get("time_limit", time_limit)))
    out_dir.mkdir(parents=True, exist_ok=True)
    records = bench_mod.run_suite(
        instances, solver_names, opts, workers=_worker_cap(workers),
        on_record=lambda r: click.echo(
            f"  {r.instance} x {r.solver}: {r.status} {_fmt(r.time_s)}s"),
    )
    _emit_profile_outputs(records, out_dir)


@main.command("profile")
@click.argument("records_csv", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("-o", "--out-dir", type=click.Path(path_type=Path), default=Path("bench-out"),
              show_default=True)
def profile_cmd(records_csv, out_dir):
    """Recompute profile.csv and profile.svg from an existing records.csv."""
    try:
        records = bench_mod.read_records_csv(records_csv)
        profile = bench_mod.performance_profile(records)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    out_dir.mkdir(parents=True, exist_ok=True)
    bench_mod.emit_profile_plot(profile, out_dir / "profile.svg", out_dir / "profile.csv")
    click.echo(f"profile    {out_dir / 'profile.csv'}")
    click.echo(f"plot       {out_dir / 'profile.svg'}")


if __name__ == "__main__":
    main()
