"""
Tests for unary/pairwise features and the joint feature map
"""

import numpy as np
import pytest

from seqrec.features import (
    PAIRWISE_FEATURES,
    FeatureSpace,
    build_chain_scores,
    feature_dimension,
    fit_normalizer,
    haversine_km,
    indicator_mask,
    joint_feature_map,
    model_from_weights,
    pack_weights,
    pairwise_feature_index,
    raw_unary_features,
    score_trajectory,
    unary_feature_matrix,
    unary_features,
    unpack_weights,
    zero_model,
)
from seqrec.models import EmptyDataset, NonConforming, Query, Trajectory, Variant, chain_score

from .helpers import make_dataset, make_table


class TestUnaryFeatures:
    """unary 特征测试类"""

    def test_haversine_one_degree(self):
        """测试赤道上一度经度约 111.19 km"""
        assert haversine_km(0.0, 0.0, 1.0, 0.0) == pytest.approx(111.19, abs=0.01)

    def test_haversine_identity(self):
        """测试同一点距离为 0"""
        assert haversine_km(144.96, -37.81, 144.96, -37.81) == pytest.approx(0.0)

    def test_start_poi_features(self, toy_dataset):
        """测试起点自身的相对特征"""
        meta = fit_normalizer(toy_dataset)
        table = toy_dataset.pois
        query = Query(start=0, length=3)
        names = meta.unary_names

        start = raw_unary_features(table[0], query, table, meta)
        assert start[names.index("dist_start")] == pytest.approx(0.0)
        assert start[names.index("diff_pop_start")] == 0.0
        assert start[names.index("same_cat_start")] == 1.0
        assert start[names.index("traj_len")] == 3.0

        other = raw_unary_features(table[1], query, table, meta)
        # museum -> park
        assert other[names.index("same_cat_start")] == -1.0
        assert other[names.index("diff_pop_start")] == -1.0
        assert other[names.index("category=park")] == 1.0
        assert other[names.index("category=museum")] == 0.0
        clusters = [other[i] for i, n in enumerate(names) if n.startswith("cluster=")]
        assert sorted(clusters) == [0.0] * (len(clusters) - 1) + [1.0]

    def test_standardised_indicators_untouched(self, toy_dataset):
        """测试标准化不改变 ±1 指示特征"""
        meta = fit_normalizer(toy_dataset)
        matrix = unary_feature_matrix(Query(start=0, length=3), toy_dataset.pois, meta)
        column = matrix[:, meta.unary_names.index("same_cat_start")]
        assert set(np.unique(column)) <= {-1.0, 1.0}
        one_hot = [i for i, n in enumerate(meta.unary_names) if n.startswith(("category=", "cluster="))]
        assert set(np.unique(matrix[:, one_hot])) <= {0.0, 1.0}
        np.testing.assert_allclose(matrix[:, one_hot].sum(axis=1), 2.0)

    def test_unary_features_standardised_on_training_rows(self, toy_dataset):
        """测试 unary_features 在训练输入上连续维度均值为 0"""
        meta = fit_normalizer(toy_dataset)
        table = toy_dataset.pois
        rows = np.vstack([
            unary_features(poi, example.query, table, meta)
            for example in toy_dataset.examples
            for poi in table.pois
        ])
        continuous = ~indicator_mask(meta.unary_names)
        np.testing.assert_allclose(rows[:, continuous].mean(axis=0), 0.0, atol=1e-9)
        spread = rows[:, continuous].std(axis=0)
        assert np.all((np.abs(spread - 1.0) < 1e-9) | (spread < 1e-9))

        query = Query(start=2, length=4)
        np.testing.assert_allclose(
            unary_features(table[3], query, table, meta),
            unary_feature_matrix(query, table, meta)[3],
        )

    def test_position_invariant(self, toy_dataset):
        """测试 unary 特征不依赖位置"""
        meta = fit_normalizer(toy_dataset)
        space = FeatureSpace(toy_dataset.pois, meta)
        query = Query(start=0, length=3)
        a = space.psi(query, (0, 1, 2))[:meta.n_unary]
        b = space.psi(query, (0, 2, 1))[:meta.n_unary]
        np.testing.assert_allclose(a, b)


class TestNormalizer:
    """fit_normalizer 测试类"""

    def test_two_values_map_to_unit(self):
        """测试取值 {0, 2} 标准化为 ±1"""
        table = make_table(["a", "a"], coords=[(0.0, 0.0), (0.0, 0.0)], popularity=[1, 1], n_visits=[1, 1])
        # diff_pop_start over queries from both starts is constant, traj_len takes values {2, 4}
        dataset = make_dataset(table, [(0, 1), (1, 0, 1, 0)])
        meta = fit_normalizer(dataset)
        i = meta.unary_names.index("traj_len")
        assert meta.means[i] == pytest.approx(3.0)
        assert meta.stds[i] == pytest.approx(1.0)
        column = unary_feature_matrix(Query(start=0, length=2), table, meta)[:, i]
        np.testing.assert_allclose(column, -1.0)

    def test_constant_dimension_std_one(self, toy_dataset):
        """测试零方差维度 std 为 1"""
        meta = fit_normalizer(toy_dataset)
        assert all(s > 0 for s in meta.stds)

    def test_empty(self, toy_table):
        """测试空训练集"""
        with pytest.raises(EmptyDataset):
            fit_normalizer(make_dataset(toy_table, []))


class TestPairwiseFeatures:
    """pairwise_feature_index 测试类"""

    def test_index_within_cardinality(self, toy_dataset):
        """测试每个转移的索引对落在取值范围内"""
        meta = fit_normalizer(toy_dataset)
        table = toy_dataset.pois
        for p in table.pois:
            for q in table.pois:
                index = pairwise_feature_index(p, q, table, meta)
                assert len(index) == len(PAIRWISE_FEATURES)
                for (a, b), card in zip(index, meta.pairwise_cardinalities):
                    assert 0 <= a < card and 0 <= b < card
        # museum -> park
        cat = PAIRWISE_FEATURES.index("category")
        index = pairwise_feature_index(table[0], table[1], table, meta)
        assert index[cat] == (meta.categories.index("museum"), meta.categories.index("park"))

    def test_matches_transition_counts(self, toy_dataset):
        """测试索引对累加等于 Ψ 中的转移计数表"""
        meta = fit_normalizer(toy_dataset)
        table = toy_dataset.pois
        seq = (2, 3, 4, 0)
        psi = joint_feature_map(Query(start=2, length=4), Trajectory(pois=seq), table, meta)
        _, counts = unpack_weights(psi, meta)
        expected = [np.zeros((c, c)) for c in meta.pairwise_cardinalities]
        for p, q in zip(seq[:-1], seq[1:]):
            for f, (a, b) in enumerate(pairwise_feature_index(table[p], table[q], table, meta)):
                expected[f][a, b] += 1.0
        for got, want in zip(counts, expected):
            np.testing.assert_allclose(got, want)


class TestJointFeatureMap:
    """joint_feature_map / score_trajectory 测试类"""

    def test_dimension(self, toy_dataset):
        """测试 Ψ 维度"""
        meta = fit_normalizer(toy_dataset)
        psi = joint_feature_map(Query(start=0, length=3), Trajectory.of(0, 1, 2), toy_dataset.pois, meta)
        assert psi.shape == (feature_dimension(meta),)

    def test_transition_counts(self, toy_dataset):
        """测试转移计数之和等于 l-1"""
        meta = fit_normalizer(toy_dataset)
        psi = joint_feature_map(Query(start=2, length=4), Trajectory.of(2, 3, 4, 0), toy_dataset.pois, meta)
        _, tables = unpack_weights(psi, meta)
        for counts in tables:
            assert counts.sum() == pytest.approx(3.0)

    def test_score_decomposes(self, toy_dataset, rng):
        """测试 ⟨w, Ψ⟩ 等于逐因子求和与链得分"""
        meta = fit_normalizer(toy_dataset)
        w = rng.normal(size=feature_dimension(meta))
        model = model_from_weights(w, meta, Variant.SR, 1.0)
        table = toy_dataset.pois
        query = Query(start=1, length=4)
        scores = build_chain_scores(model, query, table)
        for seq in [(1, 0, 3, 2), (1, 1, 1, 1), (1, 4, 0, 4)]:
            trajectory = Trajectory(pois=seq)
            inner = float(w @ joint_feature_map(query, trajectory, table, meta))
            assert score_trajectory(model, query, trajectory, table) == pytest.approx(inner)
            assert chain_score(scores, seq, include_offset=True) == pytest.approx(inner)

    def test_zero_model_scores_zero(self, toy_dataset):
        """测试零模型得分为 0"""
        meta = fit_normalizer(toy_dataset)
        model = zero_model(meta)
        query = Query(start=3, length=2)
        assert score_trajectory(model, query, Trajectory.of(3, 4), toy_dataset.pois) == 0.0

    def test_pack_round_trip(self, toy_dataset, rng):
        """测试权重打包"""
        meta = fit_normalizer(toy_dataset)
        w = rng.normal(size=feature_dimension(meta))
        np.testing.assert_allclose(pack_weights(model_from_weights(w, meta, Variant.SP, 1.0)), w)

    def test_non_conforming(self, toy_dataset):
        """测试不符合查询的序列"""
        meta = fit_normalizer(toy_dataset)
        with pytest.raises(NonConforming):
            joint_feature_map(Query(start=0, length=3), Trajectory.of(1, 2, 3), toy_dataset.pois, meta)
        with pytest.raises(NonConforming):
            score_trajectory(zero_model(meta), Query(start=0, length=3), Trajectory.of(0, 1), toy_dataset.pois)

    def test_unknown_category(self, toy_dataset):
        """测试模型词表外的类别"""
        meta = fit_normalizer(toy_dataset)
        other = make_table(["museum", "zoo"])
        with pytest.raises(ValueError):
            FeatureSpace(other, meta)
