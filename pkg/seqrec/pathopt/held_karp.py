"""
Exact loop-free path decoding by subset dynamic programming

future(mask, last) is the best score still obtainable after standing on
``last`` with the POI set ``mask`` visited; the position is popcount(mask).
Paths are ranked best-first by partitioning on (fixed prefix, excluded next
POIs), so excluding c known paths costs at most c + 1 extractions.
"""

import heapq
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from loguru import logger

from ..models.chain import NEG_INF, ChainScores, chain_score
from ..models.errors import Infeasible, TooLarge

Seq = Tuple[int, ...]

DEFAULT_MAX_POIS = 24


@dataclass(frozen=True)
class PathCut:
    """Excludes exactly one path of length l"""
    forbidden: Seq

    @classmethod
    def of(cls, path: Sequence[int]) -> "PathCut":
        return cls(tuple(int(p) for p in getattr(path, "pois", path)))


class SubsetDP:
    """Memoised best-future table over (visited set, last POI) for one ChainScores"""

    def __init__(self, scores: ChainScores, max_pois: int = DEFAULT_MAX_POIS):
        if scores.length > scores.m:
            raise Infeasible(f"no loop-free path of length {scores.length} over {scores.m} POIs")
        if scores.m > max_pois:
            raise TooLarge(f"{scores.m} POIs exceed the exact engine limit of {max_pois}; export the ILP instead")
        self.scores = scores
        self.m = scores.m
        self.length = scores.length
        self._memo: Dict[Tuple[int, int], float] = {}
        # step gain of moving from `last` to k into position t: pairwise + unary
        self._gain = [[[float(scores.pairwise[j, k] + scores.unary[t, k]) for k in range(self.m)]
                       for j in range(self.m)] for t in range(self.length)]

    def future(self, mask: int, last: int) -> float:
        key = (mask, last)
        if key in self._memo:
            return self._memo[key]
        position = bin(mask).count("1")
        if position == self.length:
            value = 0.0
        else:
            gains = self._gain[position][last]
            value = NEG_INF
            for k in range(self.m):
                if mask & (1 << k):
                    continue
                candidate = gains[k] + self.future(mask | (1 << k), k)
                if candidate > value:
                    value = candidate
        self._memo[key] = value
        return value

    def best_next(self, prefix: Seq, mask: int, excluded: FrozenSet[int] = frozenset()) -> Optional[int]:
        """Lowest-id POI achieving the best completion after prefix, skipping excluded"""
        position = len(prefix)
        gains = self._gain[position][prefix[-1]]
        best, choice = NEG_INF, None
        for k in range(self.m):
            if mask & (1 << k) or k in excluded:
                continue
            candidate = gains[k] + self.future(mask | (1 << k), k)
            if choice is None or candidate > best:
                best, choice = candidate, k
        return choice

    def complete(self, prefix: Seq) -> Seq:
        seq = list(prefix)
        mask = 0
        for p in seq:
            mask |= 1 << p
        while len(seq) < self.length:
            k = self.best_next(tuple(seq), mask)
            seq.append(k)
            mask |= 1 << k
        return tuple(seq)

    def ranked_paths(self) -> Iterator[Tuple[Seq, float]]:
        """All paths from the start in non-increasing score order, lexicographic on ties"""
        first = self.complete((self.scores.start,))
        heap = [((-chain_score(self.scores, first), first), first, 2, frozenset())]
        while heap:
            (neg_score, _), path, partition, excluded = heapq.heappop(heap)
            yield path, -neg_score
            for t in range(partition, self.length + 1):
                prefix = path[:t - 1]
                exclude = excluded | {path[t - 1]} if t == partition else frozenset({path[t - 1]})
                mask = 0
                for p in prefix:
                    mask |= 1 << p
                choice = self.best_next(prefix, mask, exclude)
                if choice is None:
                    continue
                candidate = self.complete(prefix + (choice,))
                heapq.heappush(heap, ((-chain_score(self.scores, candidate), candidate), candidate, t, exclude))


def _forbidden(cuts: Iterable[PathCut]) -> FrozenSet[Seq]:
    return frozenset(c.forbidden for c in cuts)


def best_path_exact(
    scores: ChainScores,
    cuts: Sequence[PathCut] = (),
    max_pois: int = DEFAULT_MAX_POIS,
    dp: Optional[SubsetDP] = None,
) -> Optional[Tuple[Seq, float]]:
    """
    Best repeat-free sequence from the start, outside every cut

    Args:
        scores: Chain scores of one query
        cuts: Paths to exclude
        max_pois: Largest POI count the engine accepts
        dp: Reuse a table across calls on the same scores

    Returns:
        (path, score), or None when the cuts exclude every path

    Raises:
        Infeasible: l > m
        TooLarge: m > max_pois
    """
    dp = dp or SubsetDP(scores, max_pois)
    forbidden = _forbidden(cuts)
    for path, score in dp.ranked_paths():
        if path not in forbidden:
            return path, score
    return None


def top_k_paths_exact(
    scores: ChainScores,
    k: int,
    cuts: Sequence[PathCut] = (),
    max_pois: int = DEFAULT_MAX_POIS,
) -> List[Tuple[Seq, float]]:
    """
    Sequential top-k: re-solve, cut the answer, repeat

    Returns:
        Up to k (path, score) pairs, non-increasing; fewer when the paths run out
    """
    dp = SubsetDP(scores, max_pois)
    accumulated = list(cuts)
    results: List[Tuple[Seq, float]] = []
    for _ in range(k):
        found = best_path_exact(scores, accumulated, dp=dp)
        if found is None:
            logger.info(f"Only {len(results)} paths exist for (start={scores.start}, length={scores.length})")
            break
        results.append(found)
        accumulated.append(PathCut(found[0]))
    return results
