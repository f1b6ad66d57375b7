import csv

import numpy as np
import pytest

from l1pursuit.instances import BpInstance, GenSpec, check_erc, generate, lp_oracle
from l1pursuit.map_engine import MapConfig
from l1pursuit.solvers import (
    HocFailure,
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
    support_indices,
    trajectory_to_csv,
)

from conftest import small_instances

NO_HOC = SolverOptions(hoc_enabled=False)


def erc_instance(m=20, n=50, s=3, start_seed=0):
    seed = start_seed
    while True:
        inst = generate(GenSpec(m=m, n=n, s=s, seed=seed))
        if check_erc(inst).holds:
            return inst
        seed += 1


class TestZeroRhs:
    @pytest.mark.parametrize("solve", [bpmap_solve, bpmap_bin_solve, isal1_solve])
    def test_immediate_zero_solution(self, solve):
        inst = BpInstance(A=np.array([[1.0, 2.0]]), b=np.array([0.0]))
        result = solve(inst)
        assert result.status is SolveStatus.OPTIMAL
        assert not np.any(result.x)
        assert result.objective == 0.0
        assert result.outer_iterations == 0


class TestBpmap:
    def test_toy_first_radius_and_solution(self, toy_instance):
        result = bpmap_solve(toy_instance, NO_HOC)
        assert result.solved
        # r_0 = 0, r_1 = ||P_M(0)||_2 = 2/sqrt(5)
        assert result.trajectory[0].r == 0.0
        assert abs(result.trajectory[1].r - 2.0 / np.sqrt(5.0)) <= 1e-12
        assert abs(result.objective - 1.0) <= 1e-5
        assert np.abs(result.x - np.array([0.0, 1.0])).max() <= 1e-4

    def test_toy_with_hoc(self, toy_instance):
        result = bpmap_solve(toy_instance)
        assert result.solved
        assert abs(result.objective - 1.0) <= 1e-5

    def test_erc_instance_recovers_planted(self):
        inst = erc_instance()
        result = bpmap_solve(inst)
        assert result.solved
        assert np.abs(result.x - inst.x_true).max() <= 1e-4

    def test_radius_monotone_and_bounded(self):
        # Certificate exits happen while the radius is still well below the
        # optimum, so those trajectories meet the tight bound.  Runs that
        # crawl to feasibility can overestimate a stalled displacement near
        # tangency, so they only get a stall-level sanity bound.
        for inst in small_instances(10, base_seed=3000):
            oracle = lp_oracle(inst)
            result = bpmap_solve(inst)
            rs = [p.r for p in result.trajectory]
            assert all(rs[i + 1] >= rs[i] for i in range(len(rs) - 1))
            if result.status is SolveStatus.HOC_OPTIMAL:
                assert max(rs) <= oracle.objective + 1e-6
            else:
                assert max(rs) <= oracle.objective + 1e-2 * (1 + oracle.objective)

    def test_ball_iterate_norm_tracks_radius(self, toy_instance):
        seen = []
        bpmap_solve(toy_instance, NO_HOC,
                    observer=lambda st: seen.append((st.r, float(np.abs(st.z).sum()))))
        assert len(seen) >= 2
        for r, z_norm in seen:
            assert abs(z_norm - r) <= 1e-8

    def test_success_residual_contract(self):
        for inst in small_instances(5, base_seed=3200):
            result = bpmap_solve(inst)
            if result.solved:
                assert result.residual <= 1e-6 * (1 + np.linalg.norm(inst.b))

    def test_iter_limit(self, toy_instance):
        result = bpmap_solve(toy_instance, SolverOptions(hoc_enabled=False, outer_cap=1))
        assert result.status is SolveStatus.ITER_LIMIT
        assert result.outer_iterations == 1

    def test_time_limit(self):
        inst = generate(GenSpec(m=30, n=120, s=4, seed=77))
        result = bpmap_solve(inst, SolverOptions(hoc_enabled=False, time_limit=1e-4))
        assert result.status is SolveStatus.TIME_LIMIT

    def test_backend_failure_carries_trajectory(self):
        A = np.array([[1.0, 2.0], [1.0, 2.0]])  # rank deficient
        inst = BpInstance(A=A, b=np.array([1.0, 1.0]))
        with pytest.raises(SolverError) as err:
            bpmap_solve(inst)
        assert err.value.trajectory == []

    def test_gap_and_certificate_together(self, toy_instance):
        for inst in [toy_instance] + small_instances(5, base_seed=3300):
            result = bpmap_solve(inst)
            assert (result.gap is None) == (result.certificate is None)
            if result.status is SolveStatus.HOC_OPTIMAL:
                assert result.certificate is not None


class TestHoc:
    def test_analytic_certificate(self, toy_instance):
        outcome = hoc_check(toy_instance, np.array([0.0, 1.0]))
        assert outcome.success
        assert np.allclose(outcome.what, [0.5])
        assert abs(outcome.gap) <= 1e-10
        assert np.allclose(outcome.xhat, [0.0, 1.0])

    def test_empty_support(self, toy_instance):
        outcome = hoc_check(toy_instance, np.zeros(2))
        assert not outcome.success
        assert outcome.reason is HocFailure.SUPPORT_EMPTY

    def test_perturbed_planted_solution_recovered(self):
        inst = erc_instance()
        S = np.nonzero(inst.x_true)[0]
        x = inst.x_true.copy()
        rng = np.random.default_rng(0)
        x[S] += 1e-9 * rng.standard_normal(S.size)
        outcome = hoc_check(inst, x)
        assert outcome.success
        assert np.abs(outcome.xhat - inst.x_true).max() <= 1e-8

    def test_wrong_support_fails(self, toy_instance):
        # support {0} gives w = 1 and ||A^T w||_inf = 2 > 1
        outcome = hoc_check(toy_instance, np.array([2.0, 0.0]))
        assert not outcome.success
        assert outcome.reason is HocFailure.DUAL_INFEASIBLE

    def test_gap_failure(self):
        # orthogonal columns: dual feasibility holds for any sign support,
        # but a strict subset of the true support cannot reproduce b.
        inst = BpInstance(A=np.eye(2), b=np.array([1.0, 1.0]))
        outcome = hoc_check(inst, np.array([1.0, 0.0]))
        assert not outcome.success
        assert outcome.reason in (HocFailure.PRIMAL_INCONSISTENT, HocFailure.GAP_TOO_LARGE)

    def test_zero_rhs_rejected(self):
        inst = BpInstance(A=np.eye(2), b=np.zeros(2))
        with pytest.raises(ValueError):
            hoc_check(inst, np.array([1.0, 0.0]))

    def test_sparse_matrix_path(self):
        import scipy.sparse

        inst = erc_instance(m=15, n=40, s=3)
        sparse_inst = BpInstance(
            A=scipy.sparse.csc_array(inst.A), b=inst.b, x_true=inst.x_true)
        outcome = hoc_check(sparse_inst, inst.x_true)
        assert outcome.success
        assert np.abs(outcome.xhat - inst.x_true).max() <= 1e-8

    def test_soundness_triple(self):
        # every Success must satisfy the independent verification triple
        inst = erc_instance()
        outcome = hoc_check(inst, inst.x_true)
        assert outcome.success
        assert np.linalg.norm(inst.A @ outcome.xhat - inst.b) <= 1e-6 * (1 + np.linalg.norm(inst.b))
        assert np.abs(inst.A.T @ outcome.what).max() <= 1 + 1e-6
        obj = np.abs(outcome.xhat).sum()
        assert abs(obj - inst.b @ outcome.what) <= 1e-6 * obj


class TestHocTriggerPolicy:
    def test_equal_nonempty(self):
        assert hoc_trigger_policy({1, 3}, {1, 3}) is True

    def test_strict_subset(self):
        assert hoc_trigger_policy({1, 3}, {1, 3, 7}) is False

    def test_empty_never_triggers(self):
        assert hoc_trigger_policy(set(), set()) is False

    def test_accepts_index_arrays(self):
        assert hoc_trigger_policy(np.array([0, 2]), np.array([0, 2])) is True


class TestSupportIndices:
    def test_thresholds(self):
        opts = SolverOptions()
        x = np.array([1.0, 1e-11, 0.0, -0.5])
        assert list(support_indices(x, opts)) == [0, 3]

    def test_zero_vector(self):
        assert support_indices(np.zeros(4), SolverOptions()).size == 0


class TestBpmapBin:
    def test_toy_initial_upper_bound(self, toy_instance):
        result = bpmap_bin_solve(toy_instance, NO_HOC)
        # R_0 = ||P_M(0)||_1 = ||(2/5, 4/5)||_1 = 6/5
        assert abs(result.trajectory[0].R - 1.2) <= 1e-12
        assert result.trajectory[0].r == 0.0
        assert result.solved
        assert abs(result.objective - 1.0) <= 1e-5

    def test_bracket_shrink_factors_exact(self, toy_instance):
        alpha = 0.9
        result = bpmap_bin_solve(toy_instance, SolverOptions(hoc_enabled=False, bin_alpha=alpha))
        widths = [p.bracket_width for p in result.trajectory]
        assert len(widths) >= 5
        for w0, w1 in zip(widths, widths[1:]):
            ratio = w1 / w0
            assert min(abs(ratio - alpha), abs(ratio - (1 - alpha))) <= 1e-12

    def test_bracket_contains_optimum(self):
        for inst in small_instances(8, base_seed=3500):
            oracle = lp_oracle(inst)
            result = bpmap_bin_solve(inst, NO_HOC)
            scale = 1.0 + oracle.objective
            for p in result.trajectory:
                assert p.r <= oracle.objective + 1e-5 * scale
                assert p.R >= oracle.objective - 1e-5 * scale

    def test_final_bracket_reported(self, toy_instance):
        result = bpmap_bin_solve(toy_instance, NO_HOC)
        lo, hi = result.bracket
        width = hi - lo
        assert width <= 1e-6 or width <= 1e-6 * hi
        assert lo <= result.objective + 1e-6

    def test_hoc_variant(self, toy_instance):
        result = bpmap_bin_solve(toy_instance)
        assert result.solved
        assert abs(result.objective - 1.0) <= 1e-5

    def test_alpha_validation(self):
        with pytest.raises(ValueError):
            SolverOptions(bin_alpha=1.0)
        with pytest.raises(ValueError):
            SolverOptions(bin_alpha=0.0)


class TestIsal1:
    def test_toy_objective_monotone_to_optimum(self, toy_instance):
        result = isal1_solve(toy_instance)
        objs = [p.r for p in result.trajectory]
        assert all(objs[i + 1] <= objs[i] + 1e-8 for i in range(len(objs) - 1))
        assert abs(result.objective - 1.0) <= 1e-4

    def test_iterates_stay_feasible(self):
        inst = generate(GenSpec(m=6, n=14, s=2, seed=21))
        result = isal1_solve(inst, SolverOptions(outer_cap=500))
        bound = 1e-6 * (1 + np.linalg.norm(inst.b))
        residuals = [p.residual for p in result.trajectory]
        assert residuals and all(res <= bound for res in residuals)

    def test_optimal_start_is_fixed_point(self):
        # x0 = P_M(0) = (1, 0) is already the unique optimum; the first
        # certificate attempt fires immediately.
        inst = BpInstance(A=np.array([[1.0, 0.0]]), b=np.array([1.0]))
        result = isal1_solve(inst)
        assert result.status is SolveStatus.HOC_OPTIMAL
        assert np.allclose(result.x, [1.0, 0.0])

    def test_zero_step_at_tight_bound(self, toy_instance):
        # with phi equal to the optimum the Polyak step vanishes at the optimum
        x = np.array([0.0, 1.0])
        h = np.sign(x)
        phi = 1.0
        step = (np.abs(x).sum() - phi) / float(h @ h)
        assert step == 0.0


class TestDualLowerBound:
    def test_tight_bound(self, toy_instance):
        assert dual_lower_bound(toy_instance, np.array([1.0])) == pytest.approx(1.0)

    def test_loose_but_valid(self, toy_instance):
        assert dual_lower_bound(toy_instance, np.array([-1.0])) == pytest.approx(-1.0)

    def test_zero_gradient_sentinel(self):
        inst = BpInstance(A=np.array([[0.0, 0.0]]), b=np.array([1.0]))
        assert dual_lower_bound(inst, np.array([1.0])) == float("-inf")

    def test_weak_duality_property(self):
        for trial in range(100):
            rng = np.random.default_rng(trial)
            inst = generate(GenSpec(m=5, n=12, s=2, seed=trial))
            w = rng.standard_normal(5)
            bound = dual_lower_bound(inst, w)
            assert bound <= np.abs(inst.x_true).sum() + 1e-10


class TestCrossSolverAgreement:
    def test_objectives_agree_on_unique_instances(self):
        checked = isal1_checked = 0
        for inst in small_instances(20, base_seed=3700):
            oracle = lp_oracle(inst)
            if oracle.tie:
                continue
            checked += 1
            scale = max(1.0, oracle.objective)
            r_map = bpmap_solve(inst)
            r_bin = bpmap_bin_solve(inst)
            assert abs(r_map.objective - oracle.objective) <= 1e-4 * scale
            assert abs(r_bin.objective - oracle.objective) <= 1e-4 * scale
            r_sub = isal1_solve(inst, SolverOptions(time_limit=10.0, outer_cap=50_000))
            if r_sub.solved:
                isal1_checked += 1
                assert abs(r_sub.objective - oracle.objective) <= 1e-4 * scale
        assert checked >= 10
        assert isal1_checked >= checked // 2


class TestSolveNamed:
    def test_hoc_flag_wiring(self, toy_instance):
        assert solve_named("bpmap", toy_instance).hoc_calls == 0
        assert solve_named("bpmap-bin", toy_instance).hoc_calls == 0

    def test_unknown_name(self, toy_instance):
        with pytest.raises(ValueError):
            solve_named("simplex", toy_instance)


class TestTrajectoryCsv:
    def test_schema(self, tmp_path, toy_instance):
        result = bpmap_bin_solve(toy_instance, NO_HOC)
        path = tmp_path / "traj.csv"
        trajectory_to_csv(result.trajectory, path)
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["k", "r_k", "R_k", "norm_d", "inner_iters", "elapsed_s"]
        assert len(rows) == len(result.trajectory) + 1
        assert rows[1][2] != ""  # BIN logs the upper radius

    def test_plain_solver_leaves_R_empty(self, tmp_path, toy_instance):
        result = bpmap_solve(toy_instance, NO_HOC)
        path = tmp_path / "traj.csv"
        trajectory_to_csv(result.trajectory, path)
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert all(row[2] == "" for row in rows[1:])
