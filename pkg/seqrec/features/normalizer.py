"""Feature-space fitting: vocabulary, bins, clusters and unary standardisation"""

import numpy as np
from loguru import logger
from sklearn.preprocessing import StandardScaler

from ..models.errors import EmptyDataset
from ..models.schemas import Dataset, FeatureMeta, PoiTable
from .pairwise import PAIRWISE_FEATURES, pairwise_cardinalities
from .unary import indicator_mask, raw_unary_matrix, unary_feature_names


def fit_normalizer(train: Dataset) -> FeatureMeta:
    """
    Fit feature metadata on training queries

    Means and stds are taken over every (POI, query) pair of the training
    queries. Indicator dimensions keep mean 0 / std 1; zero-variance
    dimensions get std 1 so they pass through centred.

    Args:
        train: Training dataset

    Returns:
        FeatureMeta for the model

    Raises:
        EmptyDataset: train has no examples
    """
    if not train.examples:
        raise EmptyDataset("cannot fit the feature normaliser on an empty dataset")

    table = train.pois
    categories = sorted(set(table.categories()))
    names = unary_feature_names(categories, table.n_clusters)
    indicators = indicator_mask(names)

    raw = np.vstack([
        raw_unary_matrix(example.query, table, categories, table.n_clusters)
        for example in train.examples
    ])

    means = np.zeros(len(names))
    stds = np.ones(len(names))
    continuous = ~indicators
    if continuous.any():
        # population std; StandardScaler sets scale 1 on constant columns
        scaler = StandardScaler().fit(raw[:, continuous])
        means[continuous] = scaler.mean_
        stds[continuous] = scaler.scale_

    logger.debug(f"Fitted normaliser on {raw.shape[0]} (poi, query) rows, {len(names)} unary dims")
    return FeatureMeta(
        categories=categories,
        n_clusters=table.n_clusters,
        centroids=table.centroids,
        n_bins=table.n_bins,
        pop_edges=table.pop_edges,
        visit_edges=table.visit_edges,
        duration_edges=table.duration_edges,
        unary_names=names,
        means=means.tolist(),
        stds=stds.tolist(),
        pairwise_features=list(PAIRWISE_FEATURES),
        pairwise_cardinalities=pairwise_cardinalities(len(categories), table.n_clusters, table.n_bins),
    )


def check_meta(meta: FeatureMeta, table: PoiTable) -> None:
    """Raise ValueError when a POI table does not fit a model's feature space"""
    vocab = set(meta.categories)
    unknown = sorted({p.category for p in table.pois} - vocab)
    if unknown:
        raise ValueError(f"categories {unknown} are not in the model vocabulary")
    if table.n_bins != meta.n_bins:
        raise ValueError(f"table has {table.n_bins} bins, model expects {meta.n_bins}")
    if any(p.cluster_id >= meta.n_clusters for p in table.pois):
        raise ValueError(f"cluster ids exceed the model's {meta.n_clusters} clusters")
