"""Chain score tables consumed by every decoder"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

# Minus infinity is the most negative finite float, never -inf or NaN.
NEG_INF = float(np.finfo(np.float64).min)


def clamp(values: np.ndarray) -> np.ndarray:
    """Pull overflowed sums back to NEG_INF"""
    return np.maximum(values, NEG_INF)


@dataclass(frozen=True)
class ChainScores:
    """
    Unary table [position x poi] plus pairwise table [poi x poi] for one query.

    Row 0 of ``unary`` is the start clamp: 0 at ``start`` and NEG_INF elsewhere.
    ``offset`` carries the start POI's own unary score, a constant shared by
    every sequence of the query; decoders ignore it.
    """
    unary: np.ndarray
    pairwise: np.ndarray
    start: int
    length: int
    offset: float = 0.0

    def __post_init__(self):
        unary = np.array(self.unary, dtype=np.float64)
        pairwise = np.array(self.pairwise, dtype=np.float64)
        if unary.ndim != 2 or unary.shape[0] != self.length:
            raise ValueError(f"unary must have shape (length={self.length}, m), got {unary.shape}")
        m = unary.shape[1]
        if pairwise.shape != (m, m):
            raise ValueError(f"pairwise must have shape ({m}, {m}), got {pairwise.shape}")
        if not 0 <= self.start < m:
            raise ValueError(f"start {self.start} outside POI range [0, {m})")
        if np.isnan(unary).any() or np.isnan(pairwise).any():
            raise ValueError("chain scores must not contain NaN")
        unary.setflags(write=False)
        pairwise.setflags(write=False)
        object.__setattr__(self, "unary", unary)
        object.__setattr__(self, "pairwise", pairwise)

    @property
    def m(self) -> int:
        return self.unary.shape[1]

    @classmethod
    def from_tied(
        cls,
        unary_row: np.ndarray,
        pairwise: np.ndarray,
        start: int,
        length: int,
        offset: float = 0.0,
    ) -> "ChainScores":
        """Build scores whose positions 2..l share one unary row"""
        unary_row = np.asarray(unary_row, dtype=np.float64)
        unary = np.tile(unary_row, (length, 1))
        unary[0] = start_row(unary_row.shape[0], start)
        return cls(unary=unary, pairwise=pairwise, start=start, length=length, offset=offset)

    def with_unary(self, unary: np.ndarray) -> "ChainScores":
        return ChainScores(unary=unary, pairwise=self.pairwise, start=self.start,
                           length=self.length, offset=self.offset)


def start_row(m: int, start: int) -> np.ndarray:
    row = np.full(m, NEG_INF)
    row[start] = 0.0
    return row


def chain_score(scores: ChainScores, seq: Sequence[int], include_offset: bool = False) -> float:
    """
    Score of a sequence under the chain: Σ_t unary[t][y_t] + Σ_t pairwise[y_t][y_t+1].

    Summation runs left to right in one fixed order, so equal sequences always
    get bit-identical scores.
    """
    seq = tuple(int(p) for p in seq)
    if len(seq) != scores.length:
        raise ValueError(f"sequence length {len(seq)} != chain length {scores.length}")
    total = float(scores.unary[0, seq[0]])
    for t in range(1, len(seq)):
        total += float(scores.pairwise[seq[t - 1], seq[t]]) + float(scores.unary[t, seq[t]])
    if include_offset:
        total += scores.offset
    return max(total, NEG_INF)
