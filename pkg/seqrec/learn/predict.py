"""Top-k loop-free path prediction for trained models"""

import numpy as np
from scipy.special import log_softmax

from ..features.joint import FeatureSpace, build_chain_scores
from ..models.chain import ChainScores
from ..models.errors import Infeasible
from ..models.schemas import Model, PoiTable, Query, Variant
from ..pathopt.engine import DEFAULT_ILP_THRESHOLD, TopKResult, top_k_paths
from ..pathopt.held_karp import DEFAULT_MAX_POIS


def poirank_chain_scores(model: Model, query: Query, table: PoiTable) -> ChainScores:
    """Ranking scores turned into log-probabilities over POIs, used as tied unary rows"""
    space = FeatureSpace(table, model.feature_meta)
    ranking = space.unary_matrix(query) @ np.asarray(model.unary_weights, dtype=np.float64)
    row = log_softmax(ranking)
    return ChainScores.from_tied(row, np.zeros((table.m, table.m)), query.start, query.length)


def model_chain_scores(model: Model, query: Query, table: PoiTable) -> ChainScores:
    if Variant(model.variant) is Variant.POIRANK:
        return poirank_chain_scores(model, query, table)
    return build_chain_scores(model, query, table)


def predict_topk(
    model: Model,
    query: Query,
    k: int,
    table: PoiTable,
    threshold: int = DEFAULT_ILP_THRESHOLD,
    max_expansions: int = 1_000_000,
    max_pois: int = DEFAULT_MAX_POIS,
) -> TopKResult:
    """
    Top-k loop-free paths of a model for one query

    Every variant predicts paths, whatever predicate it was trained under.

    Args:
        model: Trained model
        query: Start POI and length
        k: Number of paths
        table: POI universe the query lives in
        threshold: Queries at least this long use the exact path engine
        max_expansions: Heap pops allowed for list Viterbi
        max_pois: Largest POI universe of the exact engine

    Returns:
        TopKResult (``exhausted`` flags a partial list)

    Raises:
        Infeasible: query.length > number of POIs
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if query.start not in table:
        raise ValueError(f"start POI {query.start} is not in the POI table")
    if query.length > table.m:
        raise Infeasible(f"no loop-free path of length {query.length} over {table.m} POIs")
    scores = model_chain_scores(model, query, table)
    return top_k_paths(scores, k, threshold=threshold, max_expansions=max_expansions, max_pois=max_pois)
