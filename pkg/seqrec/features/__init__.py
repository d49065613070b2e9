"""Unary and pairwise features, joint feature map, chain scores"""

from .joint import (
    FeatureSpace,
    build_chain_scores,
    feature_dimension,
    joint_feature_map,
    model_from_weights,
    pack_weights,
    score_trajectory,
    unpack_weights,
    zero_model,
)
from .normalizer import check_meta, fit_normalizer
from .pairwise import (
    PAIRWISE_FEATURES,
    PairwiseFeatureIndex,
    pairwise_feature_index,
    pairwise_score_matrix,
    pairwise_values,
)
from .unary import (
    EARTH_RADIUS_KM,
    haversine_km,
    indicator_mask,
    raw_unary_features,
    raw_unary_matrix,
    unary_feature_matrix,
    unary_feature_names,
    unary_features,
)

__all__ = [
    "FeatureSpace",
    "build_chain_scores",
    "feature_dimension",
    "joint_feature_map",
    "model_from_weights",
    "pack_weights",
    "score_trajectory",
    "unpack_weights",
    "zero_model",
    "check_meta",
    "fit_normalizer",
    "PAIRWISE_FEATURES",
    "PairwiseFeatureIndex",
    "pairwise_feature_index",
    "pairwise_score_matrix",
    "pairwise_values",
    "EARTH_RADIUS_KM",
    "haversine_km",
    "indicator_mask",
    "raw_unary_features",
    "raw_unary_matrix",
    "unary_feature_matrix",
    "unary_feature_names",
    "unary_features",
]
