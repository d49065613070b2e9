"""Corpus ingest: CSV loading, POI statistics, splits"""

from .corpus_loader import (
    Corpus,
    extract_trajectories,
    extract_trajectory_visits,
    group_trajectories,
    load_corpus,
    read_corpus,
    read_poi_file,
    read_visit_file,
    summarize_corpus,
)
from .poi_stats import cluster_pois, derive_stats, quantile_bins, refit_stats, visit_frame, visit_statistics
from .splits import split_monte_carlo, training_view

__all__ = [
    "Corpus",
    "load_corpus",
    "read_corpus",
    "read_poi_file",
    "read_visit_file",
    "extract_trajectories",
    "extract_trajectory_visits",
    "group_trajectories",
    "summarize_corpus",
    "derive_stats",
    "cluster_pois",
    "quantile_bins",
    "refit_stats",
    "visit_frame",
    "visit_statistics",
    "split_monte_carlo",
    "training_view",
]
