"""POI-query unary features"""

from typing import List, Sequence

import numpy as np

from ..models.schemas import FeatureMeta, Poi, PoiTable, Query

EARTH_RADIUS_KM = 6371.0

INDICATOR_PREFIXES = ("category=", "cluster=")
INDICATOR_NAMES = ("same_cat_start", "same_neighbourhood_start")

POI_NUMERIC = ("log_popularity", "log_n_visits", "log_avg_duration")
QUERY_NUMERIC = ("traj_len",)
START_FEATURES = (
    "same_cat_start",
    "same_neighbourhood_start",
    "diff_pop_start",
    "diff_n_visit_start",
    "diff_duration_start",
    "dist_start",
)


def haversine_km(lon1, lat1, lon2, lat2) -> np.ndarray:
    """Great-circle distance in km, vectorised over numpy arrays"""
    lon1, lat1, lon2, lat2 = (np.radians(np.asarray(v, dtype=np.float64)) for v in (lon1, lat1, lon2, lat2))
    dlon = lon2 - lon1
    dlat = lat2 - lat1
    a = np.sin(dlat / 2.0) ** 2 + np.cos(lat1) * np.cos(lat2) * np.sin(dlon / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * np.arcsin(np.sqrt(np.clip(a, 0.0, 1.0)))


def unary_feature_names(categories: Sequence[str], n_clusters: int) -> List[str]:
    return (
        [f"category={c}" for c in categories]
        + [f"cluster={k}" for k in range(n_clusters)]
        + list(POI_NUMERIC)
        + list(QUERY_NUMERIC)
        + list(START_FEATURES)
    )


def indicator_mask(names: Sequence[str]) -> np.ndarray:
    """True for one-hot and ±1 indicator dimensions, which standardisation leaves untouched"""
    return np.array([n.startswith(INDICATOR_PREFIXES) or n in INDICATOR_NAMES for n in names], dtype=bool)


def _one_hot(index: np.ndarray, size: int) -> np.ndarray:
    # out-of-vocabulary rows are all 0
    out = np.zeros((len(index), size))
    valid = (index >= 0) & (index < size)
    out[np.flatnonzero(valid), index[valid]] = 1.0
    return out


def raw_unary_matrix(query: Query, table: PoiTable, categories: Sequence[str], n_clusters: int) -> np.ndarray:
    """
    Unstandardised unary features of every POI for one query

    Args:
        query: Query (start, length)
        table: POI universe
        categories: Category vocabulary
        n_clusters: Cluster count of the feature space

    Returns:
        (m, D) array, row p = features of POI p
    """
    m = len(table)
    vocab = {c: i for i, c in enumerate(categories)}
    cat_idx = np.array([vocab.get(p.category, -1) for p in table.pois], dtype=np.int64)
    cluster_idx = np.array([p.cluster_id for p in table.pois], dtype=np.int64)

    popularity = table.column("popularity")
    n_visits = table.column("n_visits")
    duration = table.column("avg_duration")
    lon = table.column("lon")
    lat = table.column("lat")
    s = query.start

    same_cat = np.where(cat_idx == cat_idx[s], 1.0, -1.0)
    same_cluster = np.where(cluster_idx == cluster_idx[s], 1.0, -1.0)

    columns = [
        _one_hot(cat_idx, len(categories)),
        _one_hot(cluster_idx, n_clusters),
        np.column_stack([
            np.log1p(popularity),
            np.log1p(n_visits),
            np.log1p(duration),
            np.full(m, float(query.length)),
            same_cat,
            same_cluster,
            popularity - popularity[s],
            n_visits - n_visits[s],
            duration - duration[s],
            haversine_km(lon[s], lat[s], lon, lat),
        ]),
    ]
    return np.hstack(columns)


def raw_unary_features(poi: Poi, query: Query, table: PoiTable, meta: FeatureMeta) -> np.ndarray:
    """Unstandardised feature vector of one POI"""
    return raw_unary_matrix(query, table, meta.categories, meta.n_clusters)[poi.id]


def unary_feature_matrix(query: Query, table: PoiTable, meta: FeatureMeta) -> np.ndarray:
    """Standardised unary features of every POI for one query, shape (m, D)"""
    raw = raw_unary_matrix(query, table, meta.categories, meta.n_clusters)
    return (raw - np.asarray(meta.means)) / np.asarray(meta.stds)


def unary_features(poi: Poi, query: Query, table: PoiTable, meta: FeatureMeta) -> np.ndarray:
    """Standardised feature vector ψ(x, p) of one POI"""
    return unary_feature_matrix(query, table, meta)[poi.id]
