"""Max-product forward-backward tables and Viterbi decoding"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..models.chain import ChainScores, chain_score, clamp


@dataclass(frozen=True)
class DecodeTables:
    """
    alpha[t][p]: best prefix score ending at p in position t
    beta[t][p]: best suffix score after p in position t
    f_merge[t][i][j] = alpha[t][i] + pairwise[i][j] + unary[t+1][j] + beta[t+1][j]

    Positions are 0-based; f_merge has l-1 slices.
    """
    alpha: np.ndarray
    beta: np.ndarray
    f_merge: np.ndarray

    @property
    def best_score(self) -> float:
        return float(self.alpha[-1].max())


def forward_backward(scores: ChainScores) -> DecodeTables:
    """
    Forward and backward max-recurrences plus the merged transition table

    Args:
        scores: Chain scores of one query

    Returns:
        DecodeTables
    """
    l, m = scores.length, scores.m
    unary, pairwise = scores.unary, scores.pairwise

    alpha = np.empty((l, m))
    alpha[0] = unary[0]
    for t in range(1, l):
        alpha[t] = clamp((alpha[t - 1][:, None] + pairwise).max(axis=0) + unary[t])

    beta = np.zeros((l, m))
    for t in range(l - 2, -1, -1):
        beta[t] = clamp((pairwise + unary[t + 1] + beta[t + 1]).max(axis=1))

    f_merge = np.empty((max(l - 1, 0), m, m))
    for t in range(l - 1):
        f_merge[t] = clamp(alpha[t][:, None] + pairwise + (unary[t + 1] + beta[t + 1])[None, :])

    return DecodeTables(alpha=alpha, beta=beta, f_merge=f_merge)


def complete_greedy(tables: DecodeTables, prefix: Sequence[int], length: int) -> Tuple[int, ...]:
    """
    Extend a prefix with the best continuation, lowest POI id on ties

    Args:
        tables: Forward-backward tables
        prefix: Fixed leading POIs (at least one)
        length: Target length l

    Returns:
        Full sequence of length l
    """
    seq = list(prefix)
    for t in range(len(seq) - 1, length - 1):
        # np.argmax returns the first maximum, i.e. the lowest id
        seq.append(int(np.argmax(tables.f_merge[t][seq[-1]])))
    return tuple(seq)


def viterbi(scores: ChainScores, tables: DecodeTables = None) -> Tuple[Tuple[int, ...], float]:
    """
    Best sequence starting at the query start (repeats allowed)

    Returns:
        (sequence, chain score); among tied optima the lexicographically smallest
    """
    if tables is None:
        tables = forward_backward(scores)
    seq = complete_greedy(tables, (scores.start,), scores.length)
    return seq, chain_score(scores, seq)
