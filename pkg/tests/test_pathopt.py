"""
Tests for the exact path engine, engine selection and LP export
"""

import re

import numpy as np
import pytest
from mip import BINARY, INTEGER, OptimizationStatus

from seqrec.decoding import SequencePredicate, list_viterbi, viterbi
from seqrec.models import ChainScores, Infeasible, Query, TooLarge
from seqrec.pathopt import (
    Engine,
    PathCut,
    best_path_exact,
    build_path_model,
    export_ilp,
    select_engine,
    top_k_paths,
    top_k_paths_exact,
)

from .helpers import all_paths, random_scores, random_tied_scores, ranked, read_lp, solved_path


class TestExactPathEngine:
    """best_path_exact / top_k_paths_exact 测试类"""

    def test_triple_agreement(self, rng):
        """测试精确引擎、list Viterbi 与枚举三者一致"""
        for _ in range(100):
            m = int(rng.integers(2, 9))
            l = int(rng.integers(2, min(m, 6) + 1))
            scores = random_tied_scores(rng, m, l)

            brute = ranked(scores, all_paths(m, l, scores.start))
            exact_seq, exact_score = best_path_exact(scores)
            slva = list_viterbi(scores, 1, SequencePredicate.path())
            assert exact_seq == brute[0][0] == slva.sequences[0]
            assert exact_score == pytest.approx(brute[0][1])

            top = top_k_paths_exact(scores, 5)
            slva5 = list_viterbi(scores, 5, SequencePredicate.path())
            assert [seq for seq, _ in top] == slva5.sequences
            np.testing.assert_allclose([s for _, s in top], [s for _, s in slva5.items])

    def test_position_dependent_unary(self, rng):
        """测试非共享 unary 行同样正确"""
        for _ in range(20):
            scores = random_scores(rng, 5, 4)
            brute = ranked(scores, all_paths(5, 4, scores.start))
            assert best_path_exact(scores)[0] == brute[0][0]

    def test_differs_from_viterbi(self):
        """测试 Viterbi 重复访问时精确引擎给出无环路径"""
        pairwise = np.full((3, 3), -1.0)
        pairwise[1, 1] = 5.0
        scores = ChainScores.from_tied(np.array([0.0, 1.0, 0.0]), pairwise, start=0, length=3)
        assert viterbi(scores)[0] == (0, 1, 1)
        path, _ = best_path_exact(scores)
        assert path != (0, 1, 1)
        assert len(set(path)) == 3

    def test_cuts(self, rng):
        """测试 cut 排除已返回路径"""
        scores = random_tied_scores(rng, 5, 3, start=2)
        brute = ranked(scores, all_paths(5, 3, 2))
        first = best_path_exact(scores)[0]
        second = best_path_exact(scores, [PathCut.of(first)])[0]
        assert second == brute[1][0]

    def test_runs_out(self):
        """测试路径数少于 k"""
        scores = ChainScores.from_tied(np.zeros(3), np.zeros((3, 3)), start=0, length=3)
        # (0,1,2) and (0,2,1)
        assert len(top_k_paths_exact(scores, 5)) == 2
        cuts = [PathCut.of((0, 1, 2)), PathCut.of((0, 2, 1))]
        assert best_path_exact(scores, cuts) is None

    def test_infeasible(self):
        """测试 l > m"""
        scores = ChainScores.from_tied(np.zeros(2), np.zeros((2, 2)), start=0, length=3)
        with pytest.raises(Infeasible):
            best_path_exact(scores)
        with pytest.raises(Infeasible):
            top_k_paths(scores, 1)

    def test_too_large(self, rng):
        """测试 POI 数超出上限"""
        scores = random_tied_scores(rng, 6, 3)
        with pytest.raises(TooLarge):
            best_path_exact(scores, max_pois=5)


class TestEngineSelection:
    """select_engine / top_k_paths 测试类"""

    def test_threshold(self):
        """测试按长度选择引擎"""
        assert select_engine(Query(start=0, length=9), threshold=10) is Engine.SLVA
        assert select_engine(Query(start=0, length=10), threshold=10) is Engine.EXACT_PATH

    def test_both_engines_agree(self, rng):
        """测试两种引擎输出一致"""
        scores = random_tied_scores(rng, 6, 4)
        slva = top_k_paths(scores, 4, threshold=10)
        exact = top_k_paths(scores, 4, threshold=2)
        assert slva.engine is Engine.SLVA and exact.engine is Engine.EXACT_PATH
        assert [seq for seq, _ in slva.items] == [seq for seq, _ in exact.items]

    def test_too_large_falls_back(self, rng):
        """测试超出上限时回退到 list Viterbi"""
        scores = random_tied_scores(rng, 6, 3)
        result = top_k_paths(scores, 2, threshold=1, max_pois=4)
        assert result.engine is Engine.SLVA
        assert len(result.items) == 2

    def test_exhausted_flag(self):
        """测试路径不足时 exhausted"""
        scores = ChainScores.from_tied(np.zeros(3), np.zeros((3, 3)), start=1, length=3)
        result = top_k_paths(scores, 3, threshold=1)
        assert result.exhausted
        assert [t.pois for t in result.trajectories] == [(1, 0, 2), (1, 2, 0)]


class TestLpExport:
    """build_path_model / export_ilp 测试类"""

    @staticmethod
    def _scores(m=4, l=3, start=1):
        unary = np.arange(m, dtype=float)
        pairwise = np.eye(m) * -1.0
        return ChainScores.from_tied(unary, pairwise, start=start, length=l)

    @staticmethod
    def _row(model, name):
        constr = model.constr_by_name(name)
        assert constr is not None
        return {var.name: coef for var, coef in constr.expr.expr.items()}, constr.rhs

    def test_variable_order(self):
        """测试 m=3, l=2 时 9 个 u, 3 个 z, 3 个 v, 按行优先排列"""
        model = build_path_model(self._scores(m=3, l=2, start=0))
        expected = [f"u_{j}_{k}" for j in range(3) for k in range(3)] + ["z_0", "z_1", "z_2", "v_0", "v_1", "v_2"]
        assert [var.name for var in model.vars] == expected
        row, rhs = self._row(model, "n_transitions")
        assert set(row) == {f"u_{j}_{k}" for j in range(3) for k in range(3)}
        assert rhs == 1

    def test_start_rows_and_bounds(self):
        """测试起点约束与 v 的上下界"""
        model = build_path_model(self._scores())
        assert self._row(model, "start_terminal") == ({"z_1": 1.0}, 0)
        assert model.var_by_name("v_1").lb == model.var_by_name("v_1").ub == 1
        assert (model.var_by_name("v_0").lb, model.var_by_name("v_0").ub) == (2, 4)
        assert model.var_by_name("u_0_2").var_type == BINARY
        assert model.var_by_name("v_3").var_type == INTEGER

    def test_objective_coefficients(self):
        """测试目标系数为 pairwise[j][k] + unary[k]"""
        model = build_path_model(self._scores())
        objective = {var.name: coef for var, coef in model.objective.expr.items()}
        assert objective["u_2_3"] == pytest.approx(3.0)
        assert objective["u_2_2"] == pytest.approx(1.0)
        assert objective["u_0_1"] == pytest.approx(1.0)

    def test_mtz_rows(self):
        """测试 MTZ 约束个数 (m-1)(m-2)"""
        model = build_path_model(self._scores(m=5))
        assert sum(1 for c in model.constrs if re.fullmatch(r"mtz_\d+_\d+", c.name)) == 4 * 3
        row, rhs = self._row(model, "mtz_0_2")
        assert row == {"v_0": 1.0, "v_2": -1.0, "u_0_2": 4.0}
        assert rhs == 3

    def test_cut_rows(self):
        """测试每个 cut 一行"""
        cuts = [PathCut.of((1, 0, 2)), PathCut.of((1, 3, 0))]
        model = build_path_model(self._scores(), cuts)
        assert sum(1 for c in model.constrs if c.name.startswith("cut_")) == 2
        assert self._row(model, "cut_2") == ({"u_1_3": 1.0, "u_3_0": 1.0}, 1)

    def test_loss_truth_constant(self):
        """测试损失项: 常数 l-1, 真值 POI 的入边系数减 1"""
        model = build_path_model(self._scores(), loss_truth=(1, 0, 2))
        assert model.objective_const == pytest.approx(2.0)
        objective = {var.name: coef for var, coef in model.objective.expr.items()}
        assert objective["u_3_2"] == pytest.approx(1.0)
        assert objective["u_0_3"] == pytest.approx(3.0)

    def test_untied_rejected(self, rng):
        """测试非共享 unary 行被拒绝"""
        with pytest.raises(ValueError):
            build_path_model(random_scores(rng, 4, 3))

    def test_cbc_matches_exact_engine(self, rng):
        """测试 CBC 求解与精确引擎和枚举一致"""
        for _ in range(15):
            m = int(rng.integers(3, 7))
            l = int(rng.integers(2, min(m, 5) + 1))
            scores = random_tied_scores(rng, m, l)
            s = scores.start
            brute = ranked(scores, all_paths(m, l, s))

            model = build_path_model(scores)
            assert solved_path(model, m, s) == best_path_exact(scores)[0] == brute[0][0]
            assert model.objective_value == pytest.approx(brute[0][1] - scores.unary[0, s], abs=1e-6)

            cut = build_path_model(scores, [PathCut.of(brute[0][0])])
            assert solved_path(cut, m, s) == brute[1][0]

    def test_cbc_with_loss(self, rng):
        """测试带顺序无关损失时 CBC 的最优路径与枚举一致"""
        for _ in range(10):
            scores = random_tied_scores(rng, 5, 4)
            s = scores.start
            paths = all_paths(5, 4, s)
            truth = paths[int(rng.integers(len(paths)))]
            brute = ranked(scores, paths, extra=lambda seq: 3 - len(set(truth[1:]) & set(seq[1:])))
            model = build_path_model(scores, loss_truth=truth)
            assert solved_path(model, 5, s) == brute[0][0]

    def test_cuts_exhaust_paths(self):
        """测试所有路径被排除后模型不可行"""
        scores = ChainScores.from_tied(np.zeros(3), np.zeros((3, 3)), start=0, length=3)
        model = build_path_model(scores, [PathCut.of((0, 1, 2)), PathCut.of((0, 2, 1))])
        assert model.optimize() == OptimizationStatus.INFEASIBLE

    def test_export_writes_file(self, tmp_path):
        """测试写文件并可读回"""
        cuts = [PathCut.of((1, 0, 2))]
        out = export_ilp(self._scores(), cuts, tmp_path / "sub" / "q.lp")
        assert out == tmp_path / "sub" / "q.lp"
        assert [p.name for p in out.parent.iterdir()] == ["q.lp"]
        text = out.read_text()
        assert "u_1_0" in text and "cut_1" in text

        model = read_lp(out)
        # the fixed start order v_1 sits in no row
        assert model.num_cols >= 4 * 4 + 4 + 3
        assert {var.name for var in model.vars} >= {"u_1_0", "z_3", "v_2"}
        assert model.constr_by_name("cut_1") is not None
        assert model.constr_by_name("start_terminal") is not None
