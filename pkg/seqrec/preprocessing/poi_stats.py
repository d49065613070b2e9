"""POI statistics: popularity, visit counts, durations, spatial clusters and bins"""

import warnings
from typing import Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd
from loguru import logger
from sklearn.cluster import KMeans

from ..models.errors import DegenerateClustering, UnknownPoi
from ..models.schemas import GroundTruthSet, IngestConfig, Poi, PoiTable

KMEANS_MAX_ITER = 100


def quantile_bins(values: np.ndarray, n_bins: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Discretise values into n_bins quantile bins

    Args:
        values: 1-D array over the POI population
        n_bins: Number of bins B

    Returns:
        (bins, edges): bin index per value in [0, B) and the B+1 quantile edges
    """
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0)
    edges = np.quantile(values, np.linspace(0.0, 1.0, n_bins + 1))
    # inner edges only, so the top value lands in bin B-1
    bins = np.searchsorted(edges[1:-1], values, side="left")
    return bins.astype(np.int64), edges


def relabel_by_first_appearance(labels: np.ndarray) -> np.ndarray:
    mapping = {}
    out = np.empty(len(labels), dtype=np.int64)
    for i, label in enumerate(labels):
        if label not in mapping:
            mapping[label] = len(mapping)
        out[i] = mapping[label]
    return out


def cluster_pois(coords: np.ndarray, n_clusters: int, seed: int) -> Tuple[np.ndarray, List[List[float]], int]:
    """
    K-means over (lon, lat)

    Args:
        coords: (m, 2) array of [lon, lat]
        n_clusters: Requested cluster count
        seed: KMeans random_state

    Returns:
        (labels, centroids, k) where k is the cluster count actually used
    """
    m = coords.shape[0]
    if m == 0:
        return np.zeros(0, dtype=np.int64), [], 1

    n_distinct = len(np.unique(coords, axis=0))
    k = n_clusters
    if n_distinct < n_clusters:
        message = f"Only {n_distinct} distinct coordinates for {n_clusters} clusters, using {n_distinct}"
        warnings.warn(message, DegenerateClustering, stacklevel=2)
        logger.warning(message)
        k = n_distinct

    if k == 1:
        labels = np.zeros(m, dtype=np.int64)
    else:
        kmeans = KMeans(n_clusters=k, random_state=seed, max_iter=KMEANS_MAX_ITER, n_init=10)
        labels = relabel_by_first_appearance(kmeans.fit_predict(coords))

    centroids = [coords[labels == c].mean(axis=0).tolist() for c in range(k)]
    return labels, centroids, k


def visit_statistics(visits: pd.DataFrame, m: int, n_bins: int) -> Dict[str, np.ndarray]:
    """
    Per-POI popularity, visit count and mean duration, with their quantile bins

    Args:
        visits: Columns user_id, poi (dense id) and optionally duration
        m: POI count; POIs without visits get zeros
        n_bins: Number of bins B

    Returns:
        Arrays keyed by Poi field name plus the three edge arrays
    """
    index = pd.RangeIndex(m)
    grouped = visits.groupby("poi")
    n_visits = grouped.size().reindex(index, fill_value=0).to_numpy()
    popularity = grouped["user_id"].nunique().reindex(index, fill_value=0).to_numpy()
    if "duration" in visits.columns:
        avg_duration = grouped["duration"].mean().reindex(index).fillna(0.0).to_numpy()
    else:
        avg_duration = np.zeros(m)

    pop_bins, pop_edges = quantile_bins(popularity, n_bins)
    visit_bins, visit_edges = quantile_bins(n_visits, n_bins)
    duration_bins, duration_edges = quantile_bins(avg_duration, n_bins)
    return {
        "popularity": popularity,
        "n_visits": n_visits,
        "avg_duration": avg_duration,
        "pop_bin": pop_bins,
        "visit_bin": visit_bins,
        "duration_bin": duration_bins,
        "pop_edges": pop_edges,
        "visit_edges": visit_edges,
        "duration_edges": duration_edges,
    }


def _poi_update(stats: Dict[str, np.ndarray], i: int) -> Dict:
    return {
        "popularity": int(stats["popularity"][i]),
        "n_visits": int(stats["n_visits"][i]),
        "avg_duration": float(stats["avg_duration"][i]),
        "pop_bin": int(stats["pop_bin"][i]),
        "visit_bin": int(stats["visit_bin"][i]),
        "duration_bin": int(stats["duration_bin"][i]),
    }


def derive_stats(pois: pd.DataFrame, visits: pd.DataFrame, config: IngestConfig) -> PoiTable:
    """
    Build the PoiTable from raw POI rows and visit records

    Args:
        pois: Columns poi_id, category, lon, lat; row i becomes POI id i
        visits: Columns user_id, traj_id, seq_index, poi (dense id) and
            optionally duration (seconds)
        config: Cluster count, bin count and clustering seed

    Returns:
        PoiTable with statistics, clusters and bins filled in
    """
    m = len(pois)
    n_bins = config.n_bins

    if len(visits) and (visits["poi"].min() < 0 or visits["poi"].max() >= m):
        bad = visits.loc[(visits["poi"] < 0) | (visits["poi"] >= m), "poi"].iloc[0]
        raise UnknownPoi(bad)

    stats = visit_statistics(visits, m, n_bins)
    coords = pois[["lon", "lat"]].to_numpy(dtype=np.float64) if m else np.zeros((0, 2))
    cluster_ids, centroids, k = cluster_pois(coords, config.n_clusters, config.rng_seed)

    table = [
        Poi(
            id=i,
            source_id=str(pois["poi_id"].iloc[i]),
            category=str(pois["category"].iloc[i]),
            lon=float(coords[i, 0]),
            lat=float(coords[i, 1]),
            cluster_id=int(cluster_ids[i]),
            **_poi_update(stats, i),
        )
        for i in range(m)
    ]
    logger.debug(f"Derived stats for {m} POIs ({k} clusters, {n_bins} bins)")
    return PoiTable(
        pois=table,
        n_bins=n_bins,
        n_clusters=k,
        centroids=centroids,
        pop_edges=stats["pop_edges"].tolist(),
        visit_edges=stats["visit_edges"].tolist(),
        duration_edges=stats["duration_edges"].tolist(),
    )


# ============ 训练子集统计 ============

def visit_frame(examples: Sequence[GroundTruthSet]) -> pd.DataFrame:
    """Visit records of the given examples as a user_id / poi [/ duration] frame"""
    records = [v for ex in examples for v in ex.visits]
    frame = pd.DataFrame({
        "user_id": pd.Series([v.user_id for v in records], dtype=object),
        "poi": np.array([v.poi for v in records], dtype=np.int64),
    })
    if any(v.duration is not None for v in records):
        frame["duration"] = np.array(
            [np.nan if v.duration is None else v.duration for v in records], dtype=np.float64
        )
    return frame


def refit_stats(table: PoiTable, visits: pd.DataFrame) -> PoiTable:
    """
    Same POIs, clusters and bin count; statistics and bins from ``visits`` only

    Clusters depend on coordinates alone and are kept as they are.
    """
    stats = visit_statistics(visits, table.m, table.n_bins)
    pois = [poi.model_copy(update=_poi_update(stats, poi.id)) for poi in table.pois]
    return table.model_copy(update={
        "pois": pois,
        "pop_edges": stats["pop_edges"].tolist(),
        "visit_edges": stats["visit_edges"].tolist(),
        "duration_edges": stats["duration_edges"].tolist(),
    })
