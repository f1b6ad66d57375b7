import csv
import json
import re

import numpy as np
import pytest
from click.testing import CliRunner

from l1pursuit.cli import main
from l1pursuit.instances import BpInstance, GenSpec, generate, write_instance, write_mm


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def toy_dir(tmp_path, toy_instance):
    path = tmp_path / "toy"
    write_instance(toy_instance, path)
    return path


def parse_field(output: str, name: str) -> str:
    match = re.search(rf"^{name}\s+(\S+)", output, re.MULTILINE)
    assert match, f"field {name!r} not found in:\n{output}"
    return match.group(1)


class TestGenerate:
    def test_creates_instance_directory(self, runner, tmp_path):
        out = tmp_path / "inst"
        result = runner.invoke(main, [
            "generate", "--m", "20", "--n", "50", "--s", "3", "--seed", "7",
            "-o", str(out)])
        assert result.exit_code == 0, result.output
        for name in ("A.mtx", "b.mtx", "xtrue.mtx", "meta.json"):
            assert (out / name).is_file()
        meta = json.loads((out / "meta.json").read_text())
        assert meta["m"] == 20 and meta["n"] == 50 and meta["s"] == 3
        assert "erc_value" in meta

    def test_same_seed_same_erc(self, runner, tmp_path):
        args = ["generate", "--m", "10", "--n", "30", "--s", "2", "--seed", "5"]
        r1 = runner.invoke(main, args + ["-o", str(tmp_path / "a")])
        r2 = runner.invoke(main, args + ["-o", str(tmp_path / "b")])
        assert r1.exit_code == r2.exit_code == 0
        meta_a = json.loads((tmp_path / "a" / "meta.json").read_text())
        meta_b = json.loads((tmp_path / "b" / "meta.json").read_text())
        assert meta_a["erc_value"] == meta_b["erc_value"]

    def test_sparsity_above_rows_is_usage_error(self, runner, tmp_path):
        result = runner.invoke(main, [
            "generate", "--m", "3", "--n", "10", "--s", "5", "-o", str(tmp_path / "x")])
        assert result.exit_code == 2
        assert "s <= m <= n" in result.output


class TestSolve:
    def test_toy_bin_solver(self, runner, toy_dir, tmp_path):
        traj = tmp_path / "traj.csv"
        result = runner.invoke(main, [
            "solve", str(toy_dir), "--solver", "bpmap-bin", "--trajectory", str(traj)])
        assert result.exit_code == 0, result.output
        assert float(parse_field(result.output, "objective")) == pytest.approx(1.0, abs=1e-5)
        assert parse_field(result.output, "status") in ("Optimal", "HocOptimal")
        with open(traj, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["k", "r_k", "R_k", "norm_d", "inner_iters", "elapsed_s"]
        assert len(rows) > 1

    def test_zero_rhs(self, runner, tmp_path):
        inst = BpInstance(A=np.array([[1.0, 2.0]]), b=np.array([0.0]), meta={"label": "zero"})
        path = tmp_path / "zero"
        write_instance(inst, path)
        result = runner.invoke(main, ["solve", str(path)])
        assert result.exit_code == 0
        assert float(parse_field(result.output, "objective")) == 0.0
        assert parse_field(result.output, "outer_iters") == "0"

    def test_time_limit_fails_with_status(self, runner, tmp_path):
        inst = generate(GenSpec(m=30, n=120, s=4, seed=3))
        path = tmp_path / "big"
        write_instance(inst, path)
        result = runner.invoke(main, [
            "solve", str(path), "--solver", "bpmap", "--no-hoc", "--time-limit", "1e-4"])
        assert result.exit_code == 1
        assert parse_field(result.output, "status") == "TimeLimit"

    def test_isal1_requires_hoc(self, runner, toy_dir):
        result = runner.invoke(main, ["solve", str(toy_dir), "--solver", "isal1", "--no-hoc"])
        assert result.exit_code == 2

    def test_nine_significant_digits(self, runner, toy_dir):
        result = runner.invoke(main, ["solve", str(toy_dir), "--solver", "bpmap-bin"])
        value = parse_field(result.output, "objective")
        digits = value.replace(".", "").replace("-", "").lstrip("0")
        assert len(digits) <= 9


class TestCheck:
    def test_optimal_solution_passes(self, runner, toy_dir, tmp_path):
        sol = tmp_path / "x.mtx"
        write_mm(sol, np.array([0.0, 1.0]))
        result = runner.invoke(main, ["check", str(toy_dir), str(sol)])
        assert result.exit_code == 0
        assert result.output.startswith("Success")

    def test_zero_vector_fails_support_empty(self, runner, toy_dir, tmp_path):
        sol = tmp_path / "zero.mtx"
        write_mm(sol, np.zeros(2))
        result = runner.invoke(main, ["check", str(toy_dir), str(sol)])
        assert result.exit_code == 1
        assert "Failure(support-empty)" in result.output

    def test_perturbed_solution_fails(self, runner, toy_dir, tmp_path):
        sol = tmp_path / "near.mtx"
        write_mm(sol, np.array([0.1, 0.95]))
        result = runner.invoke(main, ["check", str(toy_dir), str(sol)])
        assert result.exit_code == 1
        assert result.output.startswith("Failure(")


class TestExportLp:
    def test_writes_mps(self, runner, toy_dir, tmp_path):
        out = tmp_path / "toy.mps"
        result = runner.invoke(main, ["export-lp", str(toy_dir), "-o", str(out)])
        assert result.exit_code == 0
        text = out.read_text()
        assert text.startswith("NAME")
        names = {line.split()[0] for line in text.splitlines() if line.startswith("    X")}
        assert len(names) == 4  # 2n columns


def make_manifest(tmp_path, instance_dirs, solvers, **extra):
    manifest = tmp_path / "manifest.json"
    payload = {"instances": [str(p) for p in instance_dirs], "solvers": solvers}
    payload.update(extra)
    manifest.write_text(json.dumps(payload))
    return manifest


class TestBench:
    @pytest.fixture
    def two_instances(self, tmp_path):
        dirs = []
        for seed in (1, 2):
            inst = generate(GenSpec(m=5, n=12, s=2, seed=seed))
            path = tmp_path / f"inst{seed}"
            write_instance(inst, path)
            dirs.append(path)
        return dirs

    def test_grid_outputs(self, runner, tmp_path, two_instances):
        manifest = make_manifest(tmp_path, two_instances, ["bpmap-hoc", "bpmap-hoc-bin"])
        out = tmp_path / "out"
        result = runner.invoke(main, ["bench", str(manifest), "-o", str(out)])
        assert result.exit_code == 0, result.output
        with open(out / "records.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 4
        assert (out / "profile.csv").is_file()
        assert (out / "profile.svg").is_file()

    def test_empty_manifest_is_usage_error(self, runner, tmp_path):
        manifest = make_manifest(tmp_path, [], [])
        result = runner.invoke(main, ["bench", str(manifest)])
        assert result.exit_code == 2

    def test_missing_instance_aborts_before_running(self, runner, tmp_path, two_instances):
        manifest = make_manifest(
            tmp_path, two_instances + [tmp_path / "nowhere"], ["bpmap-hoc"])
        out = tmp_path / "out"
        result = runner.invoke(main, ["bench", str(manifest), "-o", str(out)])
        assert result.exit_code != 0
        assert "nowhere" in result.output
        assert not (out / "records.csv").exists()

    def test_rerun_identical_modulo_time(self, runner, tmp_path, two_instances):
        manifest = make_manifest(tmp_path, two_instances, ["bpmap-hoc-bin"])
        outputs = []
        for name in ("one", "two"):
            out = tmp_path / name
            result = runner.invoke(main, ["bench", str(manifest), "-o", str(out)])
            assert result.exit_code == 0
            with open(out / "records.csv", newline="") as fh:
                rows = list(csv.DictReader(fh))
            outputs.append([
                {k: v for k, v in row.items() if k != "time_s"} for row in rows])
        assert outputs[0] == outputs[1]

    def test_worker_env_cap(self, runner, tmp_path, two_instances, monkeypatch):
        monkeypatch.setenv("L1PURSUIT_THREADS", "1")
        manifest = make_manifest(tmp_path, two_instances, ["bpmap-hoc"])
        result = runner.invoke(main, [
            "bench", str(manifest), "-o", str(tmp_path / "out"), "--workers", "8"])
        assert result.exit_code == 0

    def test_bad_worker_env(self, runner, tmp_path, two_instances, monkeypatch):
        monkeypatch.setenv("L1PURSUIT_THREADS", "lots")
        manifest = make_manifest(tmp_path, two_instances, ["bpmap-hoc"])
        result = runner.invoke(main, ["bench", str(manifest), "-o", str(tmp_path / "out")])
        assert result.exit_code == 2


class TestProfileCommand:
    def test_recompute_from_records(self, runner, tmp_path, toy_dir):
        manifest = make_manifest(tmp_path, [toy_dir], ["bpmap-hoc", "bpmap-hoc-bin"])
        out = tmp_path / "out"
        assert runner.invoke(main, ["bench", str(manifest), "-o", str(out)]).exit_code == 0
        out2 = tmp_path / "out2"
        result = runner.invoke(main, ["profile", str(out / "records.csv"), "-o", str(out2)])
        assert result.exit_code == 0, result.output
        assert (out2 / "profile.csv").read_bytes() == (out / "profile.csv").read_bytes()
        assert (out2 / "profile.svg").is_file()
