"""Serial list Viterbi: k-best chain sequences with a filtering predicate"""

import heapq
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from ..models.chain import ChainScores, chain_score
from .forward_backward import DecodeTables, complete_greedy, forward_backward, viterbi

Seq = Tuple[int, ...]


class PredicateKind(str, Enum):
    ANY = "ANY"
    PATH = "PATH"
    NOT_IN = "NOT_IN"
    PATH_AND_NOT_IN = "PATH_AND_NOT_IN"


@dataclass(frozen=True)
class SequencePredicate:
    """Property a decoded sequence must have to be returned"""
    kind: PredicateKind = PredicateKind.ANY
    excluded: FrozenSet[Seq] = frozenset()

    @classmethod
    def any(cls) -> "SequencePredicate":
        return cls(PredicateKind.ANY)

    @classmethod
    def path(cls) -> "SequencePredicate":
        return cls(PredicateKind.PATH)

    @classmethod
    def not_in(cls, sequences: Iterable[Sequence[int]]) -> "SequencePredicate":
        return cls(PredicateKind.NOT_IN, _freeze(sequences))

    @classmethod
    def path_and_not_in(cls, sequences: Iterable[Sequence[int]]) -> "SequencePredicate":
        return cls(PredicateKind.PATH_AND_NOT_IN, _freeze(sequences))

    @property
    def requires_path(self) -> bool:
        return self.kind in (PredicateKind.PATH, PredicateKind.PATH_AND_NOT_IN)

    def accepts(self, seq: Seq) -> bool:
        if self.requires_path and len(set(seq)) != len(seq):
            return False
        if self.kind in (PredicateKind.NOT_IN, PredicateKind.PATH_AND_NOT_IN) and seq in self.excluded:
            return False
        return True


def _freeze(sequences: Iterable[Sequence[int]]) -> FrozenSet[Seq]:
    out = set()
    for s in sequences:
        s = getattr(s, "pois", s)
        out.add(tuple(int(p) for p in s))
    return frozenset(out)


@dataclass(frozen=True, order=True)
class HeapEntry:
    """Best sequence of one partition: shares y_1..y_{I-1}, y_I outside exclude_set"""
    sort_key: Tuple[float, Seq]
    score: float = field(compare=False)
    sequence: Seq = field(compare=False)
    partition_index: Optional[int] = field(compare=False, default=None)
    exclude_set: FrozenSet[int] = field(compare=False, default=frozenset())

    @classmethod
    def make(cls, score: float, sequence: Seq, partition_index: Optional[int], exclude_set: FrozenSet[int]) -> "HeapEntry":
        # max-heap on score, ties popped in lexicographic sequence order
        return cls((-score, sequence), score, sequence, partition_index, exclude_set)


@dataclass(frozen=True)
class ListViterbiResult:
    items: List[Tuple[Seq, float]]
    exhausted: bool
    expansions: int

    @property
    def sequences(self) -> List[Seq]:
        return [seq for seq, _ in self.items]


def loop_bound(m: int, l: int, k: int, n_excluded: int = 0) -> int:
    """
    Pop limit: non-path sequence count m^(l-1) - Π_{t=2..l}(m-t+1), plus k,
    plus the number of explicitly excluded sequences
    """
    n_paths = 1
    for t in range(2, l + 1):
        n_paths *= max(m - t + 1, 0)
    return m ** (l - 1) - n_paths + k + n_excluded


def iter_ranked(scores: ChainScores, tables: Optional[DecodeTables] = None) -> Iterator[HeapEntry]:
    """
    Every sequence starting at the query start, in non-increasing score order

    Partition indices are 1-based positions; None is the initial NIL entry.
    """
    if tables is None:
        tables = forward_backward(scores)
    l = scores.length
    best, best_score = viterbi(scores, tables)
    heap = [HeapEntry.make(best_score, best, None, frozenset())]

    while heap:
        entry = heapq.heappop(heap)
        yield entry

        y = entry.sequence
        first = 2 if entry.partition_index is None else entry.partition_index
        for t in range(first, l + 1):
            exclude = entry.exclude_set | {y[t - 1]} if t == first else frozenset({y[t - 1]})
            row = tables.f_merge[t - 2][y[t - 2]]
            allowed = np.ones(scores.m, dtype=bool)
            allowed[list(exclude)] = False
            if not allowed.any():
                continue
            choice = int(np.argmax(np.where(allowed, row, -np.inf)))
            candidate = complete_greedy(tables, y[:t - 1] + (choice,), l)
            # equals r + f(y_{t-1}, y'_t) - f(y_{t-1}, y_t) but summed in chain order
            heapq.heappush(heap, HeapEntry.make(chain_score(scores, candidate), candidate, t, exclude))


def list_viterbi(
    scores: ChainScores,
    k: int,
    predicate: SequencePredicate = SequencePredicate(),
    max_expansions: int = 1_000_000,
    tables: Optional[DecodeTables] = None,
) -> ListViterbiResult:
    """
    Top-k sequences satisfying a predicate

    Args:
        scores: Chain scores of one query
        k: Number of sequences wanted (>= 1)
        predicate: Filter applied to every popped sequence
        max_expansions: Heap pops allowed
        tables: Precomputed forward-backward tables (optional)

    Returns:
        ListViterbiResult; ``exhausted`` is set when fewer than k were found
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")

    bound = loop_bound(scores.m, scores.length, k, len(predicate.excluded))
    items: List[Tuple[Seq, float]] = []
    pops = 0
    for entry in iter_ranked(scores, tables):
        pops += 1
        if predicate.accepts(entry.sequence):
            items.append((entry.sequence, entry.score))
            if len(items) >= k:
                return ListViterbiResult(items=items, exhausted=False, expansions=pops)
        if pops >= bound or pops >= max_expansions:
            break

    logger.debug(f"List Viterbi stopped after {pops} pops with {len(items)}/{k} sequences ({predicate.kind.value})")
    return ListViterbiResult(items=items, exhausted=True, expansions=pops)
