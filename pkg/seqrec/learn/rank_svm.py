"""RankSVM over POI unary features (the POIRANK baseline)"""

from collections import Counter
from typing import List, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from ..features.joint import FeatureSpace, model_from_weights, feature_dimension
from ..features.normalizer import fit_normalizer
from ..models.errors import EmptyDataset, NoPairs, NonPositiveC
from ..models.schemas import Dataset, Model, Query, Variant

Pair = Tuple[int, int]

# Armijo 参数
ARMIJO_SIGMA = 1e-4
ARMIJO_BETA = 0.5
GRAD_TOL = 1e-5


class RankPairSet(BaseModel):
    """Ordered POI pairs (p, p') per query: p occurs in strictly more ground truths than p'"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    queries: List[Query] = Field(default_factory=list)
    pairs: List[List[Pair]] = Field(default_factory=list, description="Pair list per query, same order as queries")

    @property
    def n_pairs(self) -> int:
        return sum(len(p) for p in self.pairs)


def build_rank_pairs(train: Dataset) -> RankPairSet:
    """
    Count POI occurrences over each query's ground truths and emit every strict inequality

    Unvisited POIs count 0. The start counts once per trajectory like any other POI.
    """
    m = train.pois.m
    queries, pairs = [], []
    for example in train.examples:
        counts = Counter()
        for trajectory in example.trajectories:
            counts.update(trajectory.pois)
        per_poi = [counts.get(p, 0) for p in range(m)]
        query_pairs = [(p, q) for p in range(m) for q in range(m) if per_poi[p] > per_poi[q]]
        queries.append(example.query)
        pairs.append(query_pairs)
    return RankPairSet(queries=queries, pairs=pairs)


def _objective(w: np.ndarray, diffs: np.ndarray, c: float) -> float:
    hinge = np.maximum(0.0, 1.0 - diffs @ w)
    return 0.5 * float(w @ w) + c * float(hinge @ hinge)


def _gradient(w: np.ndarray, diffs: np.ndarray, c: float) -> np.ndarray:
    hinge = np.maximum(0.0, 1.0 - diffs @ w)
    return w - 2.0 * c * (diffs.T @ hinge)


def fit_squared_hinge_rank(
    diffs: np.ndarray,
    reg_c: float,
    max_iter: int = 10_000,
    grad_tol: float = GRAD_TOL,
) -> np.ndarray:
    """
    minimise ½‖w‖² + C Σ max(0, 1 - w·d)² by full gradient descent

    Step sizes come from Armijo backtracking starting at 1 each iteration.

    Args:
        diffs: One row ψ(p) - ψ(p') per ranked pair
        reg_c: Regularisation constant C
        max_iter: Iteration guard
        grad_tol: Stop once ‖∇‖ falls to this value

    Returns:
        Weight vector
    """
    if not reg_c > 0:
        raise NonPositiveC(f"C must be positive, got {reg_c}")
    diffs = np.asarray(diffs, dtype=np.float64)
    w = np.zeros(diffs.shape[1])
    value = _objective(w, diffs, reg_c)
    for iteration in range(1, max_iter + 1):
        grad = _gradient(w, diffs, reg_c)
        norm2 = float(grad @ grad)
        if np.sqrt(norm2) <= grad_tol:
            logger.debug(f"RankSVM converged after {iteration - 1} iterations, objective={value:.8f}")
            return w
        step = 1.0
        while True:
            candidate = w - step * grad
            candidate_value = _objective(candidate, diffs, reg_c)
            if candidate_value <= value - ARMIJO_SIGMA * step * norm2 or step < 1e-20:
                break
            step *= ARMIJO_BETA
        w, value = candidate, candidate_value
    logger.warning(f"RankSVM stopped at max_iter={max_iter} with ‖∇‖={np.linalg.norm(_gradient(w, diffs, reg_c)):.2e}")
    return w


def train_poirank(train: Dataset, reg_c: float, max_iter: int = 10_000) -> Model:
    """
    训练 POIRANK 基线: unary-only model, pairwise tables all zero

    Raises:
        NonPositiveC: reg_c <= 0
        EmptyDataset: no trainable query
        NoPairs: no strict POI count inequality anywhere
    """
    if not reg_c > 0:
        raise NonPositiveC(f"C must be positive, got {reg_c}")
    usable = train.trainable()
    if not usable.examples:
        raise EmptyDataset("no training query has length >= 2")

    rank_pairs = build_rank_pairs(usable)
    if rank_pairs.n_pairs == 0:
        raise NoPairs("no POI occurs strictly more often than another in any query")

    meta = fit_normalizer(usable)
    space = FeatureSpace(usable.pois, meta)
    blocks = []
    for query, pairs in zip(rank_pairs.queries, rank_pairs.pairs):
        if not pairs:
            continue
        features = space.unary_matrix(query)
        index = np.asarray(pairs, dtype=np.int64)
        blocks.append(features[index[:, 0]] - features[index[:, 1]])
    diffs = np.vstack(blocks)
    logger.info(f"Training POIRANK on {diffs.shape[0]} pairs from {usable.n_queries} queries, C={reg_c:g}")

    w_unary = fit_squared_hinge_rank(diffs, reg_c, max_iter=max_iter)
    w = np.zeros(feature_dimension(meta))
    w[:meta.n_unary] = w_unary
    return model_from_weights(w, meta, Variant.POIRANK, reg_c)
