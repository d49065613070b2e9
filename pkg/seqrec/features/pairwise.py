"""Pairwise transition factors: one [value]x[value] weight table per POI attribute"""

from typing import List, Sequence, Tuple

import numpy as np

from ..models.schemas import FeatureMeta, Poi, PoiTable

PAIRWISE_FEATURES = ("category", "cluster", "pop_bin", "visit_bin", "duration_bin")

# (value_p, value_q) per pairwise attribute, PAIRWISE_FEATURES order
PairwiseFeatureIndex = List[Tuple[int, int]]


def pairwise_cardinalities(n_categories: int, n_clusters: int, n_bins: int) -> List[int]:
    return [n_categories, n_clusters, n_bins, n_bins, n_bins]


def pairwise_values(table: PoiTable, meta: FeatureMeta) -> np.ndarray:
    """
    Value index of every pairwise attribute for every POI

    Returns:
        (m, F) int array in PAIRWISE_FEATURES order

    Raises:
        ValueError: a POI value falls outside the feature space of meta
    """
    vocab = {c: i for i, c in enumerate(meta.categories)}
    values = np.zeros((len(table), len(PAIRWISE_FEATURES)), dtype=np.int64)
    for poi in table.pois:
        if poi.category not in vocab:
            raise ValueError(f"POI {poi.id} category {poi.category!r} is not in the model vocabulary")
        values[poi.id] = (vocab[poi.category], poi.cluster_id, poi.pop_bin, poi.visit_bin, poi.duration_bin)

    for f, card in enumerate(meta.pairwise_cardinalities):
        if len(table) and values[:, f].max() >= card:
            raise ValueError(f"pairwise feature {PAIRWISE_FEATURES[f]!r} exceeds its cardinality {card}")
    return values


def pairwise_feature_index(p: Poi, q: Poi, table: PoiTable, meta: FeatureMeta) -> PairwiseFeatureIndex:
    """(value_p, value_q) index pair of every pairwise attribute for the transition p -> q"""
    values = pairwise_values(table, meta)
    return [(int(values[p.id, f]), int(values[q.id, f])) for f in range(len(PAIRWISE_FEATURES))]


def pairwise_score_matrix(tables: Sequence[np.ndarray], values: np.ndarray) -> np.ndarray:
    """pairwise[p][q] = Σ_f W_f[value_f(p), value_f(q)]"""
    m = values.shape[0]
    scores = np.zeros((m, m))
    for f, weights in enumerate(tables):
        v = values[:, f]
        scores += np.asarray(weights)[v[:, None], v[None, :]]
    return scores
