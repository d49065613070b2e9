"""Engine selection and top-k path decoding over either engine"""

from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

from loguru import logger

from ..decoding.list_viterbi import SequencePredicate, list_viterbi
from ..models.chain import ChainScores
from ..models.errors import Infeasible, TooLarge
from ..models.schemas import Query, Trajectory
from .held_karp import DEFAULT_MAX_POIS, top_k_paths_exact

DEFAULT_ILP_THRESHOLD = 10

Seq = Tuple[int, ...]


class Engine(str, Enum):
    SLVA = "SLVA"
    EXACT_PATH = "EXACT_PATH"


def select_engine(query: Query, threshold: int = DEFAULT_ILP_THRESHOLD) -> Engine:
    """Long queries (length >= threshold) go to the exact path engine"""
    return Engine.EXACT_PATH if query.length >= threshold else Engine.SLVA


@dataclass(frozen=True)
class TopKResult:
    """Ranked loop-free paths for one query"""
    items: List[Tuple[Seq, float]]
    exhausted: bool
    engine: Engine

    @property
    def trajectories(self) -> List[Trajectory]:
        return [Trajectory(pois=seq) for seq, _ in self.items]

    @property
    def scores(self) -> List[float]:
        return [score for _, score in self.items]


def top_k_paths(
    scores: ChainScores,
    k: int,
    threshold: int = DEFAULT_ILP_THRESHOLD,
    max_expansions: int = 1_000_000,
    max_pois: int = DEFAULT_MAX_POIS,
) -> TopKResult:
    """
    Top-k loop-free paths, routed by query length

    Args:
        scores: Chain scores of one query
        k: Number of paths wanted
        threshold: Length from which the exact engine is used
        max_expansions: Heap pops allowed for the list Viterbi engine
        max_pois: Largest POI universe of the exact engine

    Returns:
        TopKResult; ``exhausted`` when fewer than k paths were produced

    Raises:
        Infeasible: length exceeds the POI count
    """
    if scores.length > scores.m:
        raise Infeasible(f"no loop-free path of length {scores.length} over {scores.m} POIs")

    engine = select_engine(Query(start=scores.start, length=scores.length), threshold)
    if engine is Engine.EXACT_PATH:
        try:
            items = top_k_paths_exact(scores, k, max_pois=max_pois)
            return TopKResult(items=items, exhausted=len(items) < k, engine=engine)
        except TooLarge as e:
            logger.warning(f"{e}; falling back to list Viterbi")
            engine = Engine.SLVA

    result = list_viterbi(scores, k, SequencePredicate.path(), max_expansions)
    if result.exhausted:
        logger.warning(
            f"List Viterbi found {len(result.items)}/{k} paths for (start={scores.start}, "
            f"length={scores.length}) within {result.expansions} expansions"
        )
    return TopKResult(items=result.items, exhausted=result.exhausted, engine=engine)
