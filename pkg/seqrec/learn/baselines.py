"""Popularity and random baselines"""

from typing import List

import numpy as np

from ..models.chain import ChainScores
from ..models.errors import Infeasible
from ..models.schemas import Dataset, PoiTable, Query, Trajectory
from ..pathopt.engine import DEFAULT_ILP_THRESHOLD, TopKResult, top_k_paths
from ..pathopt.held_karp import DEFAULT_MAX_POIS


def popularity_chain_scores(table: PoiTable, query: Query) -> ChainScores:
    """Unary = POI popularity, no transition scores: a path scores its accumulated popularity"""
    popularity = table.column("popularity").astype(np.float64)
    return ChainScores.from_tied(popularity, np.zeros((table.m, table.m)), query.start, query.length)


def baseline_popularity(
    train: Dataset,
    query: Query,
    k: int,
    threshold: int = DEFAULT_ILP_THRESHOLD,
    max_expansions: int = 1_000_000,
    max_pois: int = DEFAULT_MAX_POIS,
) -> TopKResult:
    """
    Top-k paths ranked by accumulated popularity

    Popularity comes from the POI table the training set carries.

    Raises:
        Infeasible: query.length > number of POIs
    """
    table = train.pois
    if query.length > table.m:
        raise Infeasible(f"no loop-free path of length {query.length} over {table.m} POIs")
    scores = popularity_chain_scores(table, query)
    return top_k_paths(scores, k, threshold=threshold, max_expansions=max_expansions, max_pois=max_pois)


def baseline_random(query: Query, k: int, seed: int, table: PoiTable) -> List[Trajectory]:
    """
    k independent uniform loop-free continuations of the start

    Each draw samples l-1 distinct POIs other than the start without replacement.

    Raises:
        Infeasible: query.length > number of POIs
    """
    if query.length > table.m:
        raise Infeasible(f"no loop-free path of length {query.length} over {table.m} POIs")
    rng = np.random.default_rng(seed)
    candidates = np.array([p for p in range(table.m) if p != query.start], dtype=np.int64)
    draws = []
    for _ in range(k):
        tail = rng.choice(candidates, size=query.length - 1, replace=False)
        draws.append(Trajectory(pois=(query.start, *(int(p) for p in tail))))
    return draws
