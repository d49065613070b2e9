"""Sequence metrics: point F1, pair F1 and Kendall's tau-b over induced POI ranks"""

import math
import warnings
from itertools import combinations
from typing import FrozenSet, Sequence, Tuple

import numpy as np
from loguru import logger
from scipy.stats import kendalltau

from ..models.errors import DegenerateDenominator


def _as_seq(sequence) -> Tuple[int, ...]:
    return tuple(int(p) for p in getattr(sequence, "pois", sequence))


def _f1(truth: FrozenSet, pred: FrozenSet) -> float:
    overlap = len(truth & pred)
    if overlap == 0:
        return 0.0
    precision = overlap / len(pred)
    recall = overlap / len(truth)
    return 2.0 * precision * recall / (precision + recall)


def f1_points(truth: Sequence[int], pred: Sequence[int]) -> float:
    """F1 over the sets of distinct POIs"""
    truth, pred = _as_seq(truth), _as_seq(pred)
    if not truth or not pred:
        raise ValueError("f1_points needs two non-empty sequences")
    return _f1(frozenset(truth), frozenset(pred))


def ordered_pairs(sequence: Sequence[int]) -> FrozenSet[Tuple[int, int]]:
    seq = _as_seq(sequence)
    return frozenset((seq[i], seq[j]) for i, j in combinations(range(len(seq)), 2))


def f1_pairs(truth: Sequence[int], pred: Sequence[int]) -> float:
    """
    F1 over ordered pairs {(y_i, y_j): i < j}

    Two length-1 sequences have no pairs; they score 1.0 when equal, else 0.0.
    """
    truth_pairs, pred_pairs = ordered_pairs(truth), ordered_pairs(pred)
    if not truth_pairs and not pred_pairs:
        return 1.0 if _as_seq(truth) == _as_seq(pred) else 0.0
    if not truth_pairs or not pred_pairs:
        return 0.0
    return _f1(truth_pairs, pred_pairs)


def position_ranks(sequence: Sequence[int], m: int) -> np.ndarray:
    """rank(p) = m - j + 1 for the POI at 1-based position j, 0 for unvisited POIs"""
    ranks = np.zeros(m, dtype=np.int64)
    for j, p in enumerate(_as_seq(sequence), start=1):
        if not 0 <= p < m:
            raise ValueError(f"POI {p} outside the universe of {m} POIs")
        ranks[p] = m - j + 1
    return ranks


def kendall_tau_b(truth: Sequence[int], pred: Sequence[int], m: int, strict: bool = False) -> float:
    """
    Kendall's tau-b between the POI rankings two sequences induce over all m POIs

    Args:
        truth: Ground-truth path
        pred: Predicted path
        m: Size of the POI universe
        strict: Raise instead of returning the 1.0 convention on a zero denominator

    Returns:
        tau-b in [-1, 1]

    Raises:
        DegenerateDenominator: every item pair is tied and strict is set
    """
    x = position_ranks(truth, m)
    y = position_ranks(pred, m)
    if m < 2 or np.all(x == x[0]) or np.all(y == y[0]):
        message = f"tau-b undefined for m={m}, truth={list(_as_seq(truth))}, pred={list(_as_seq(pred))}"
        if strict:
            raise DegenerateDenominator(message)
        logger.warning(f"{message}; returning 1.0")
        return 1.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        tau = kendalltau(x, y, variant="b")[0]
    return float(tau)


def kendall_tau_b_pairs(x: Sequence[float], y: Sequence[float]) -> float:
    """
    tau-b by explicit pair enumeration

    (C - D) / sqrt((C + D + T) (C + D + U)), where T counts pairs tied only in
    x and U pairs tied only in y.
    """
    concordant = discordant = tied_x = tied_y = 0
    for i, j in combinations(range(len(x)), 2):
        dx = x[i] - x[j]
        dy = y[i] - y[j]
        if dx == 0 and dy == 0:
            continue
        if dx == 0:
            tied_x += 1
        elif dy == 0:
            tied_y += 1
        elif (dx > 0) == (dy > 0):
            concordant += 1
        else:
            discordant += 1
    denominator = math.sqrt((concordant + discordant + tied_x) * (concordant + discordant + tied_y))
    if denominator == 0:
        raise DegenerateDenominator("every pair is tied")
    return (concordant - discordant) / denominator
