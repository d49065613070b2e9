"""Hamming loss augmentation and most-violating constraint search"""

from typing import Any, Iterable, Sequence, Tuple

import numpy as np

from ..models.chain import ChainScores
from ..models.errors import NonConforming, SearchExhausted
from ..models.schemas import Variant
from .list_viterbi import SequencePredicate, list_viterbi

Seq = Tuple[int, ...]


def _as_seq(sequence) -> Seq:
    return tuple(int(p) for p in getattr(sequence, "pois", sequence))


def hamming(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(1 for x, y in zip(a, b) if x != y)


def loss_augment(scores: ChainScores, truth: Sequence[int]) -> ChainScores:
    """
    Add the Hamming loss against ``truth`` to the unary table

    unary[t][p] += 1 for p != truth_t. Position 1 is left as is: both the truth
    and every candidate sit on the start there.

    Raises:
        NonConforming: truth does not start at the query start or has the wrong length
    """
    truth = _as_seq(truth)
    if len(truth) != scores.length or truth[0] != scores.start:
        raise NonConforming(f"truth {list(truth)} does not conform to (start={scores.start}, length={scores.length})")

    unary = np.array(scores.unary)
    for t in range(1, scores.length):
        unary[t] += 1.0
        unary[t, truth[t]] -= 1.0
    return scores.with_unary(unary)


def predicate_for(variant: Variant, truths: Iterable[Sequence[int]]) -> SequencePredicate:
    """SP -> ANY, SR -> NOT_IN(truths), SPpath -> PATH, SRpath -> PATH_AND_NOT_IN(truths)"""
    variant = Variant(variant)
    if variant is Variant.SP:
        return SequencePredicate.any()
    if variant is Variant.SR:
        return SequencePredicate.not_in(truths)
    if variant is Variant.SPPATH:
        return SequencePredicate.path()
    if variant is Variant.SRPATH:
        return SequencePredicate.path_and_not_in(truths)
    raise ValueError(f"variant {variant.value} has no loss-augmented inference")


def most_violating(
    scores: ChainScores,
    truths: Iterable[Sequence[int]],
    variant: Variant,
    truth: Sequence[int],
    max_expansions: int = 1_000_000,
    query: Any = None,
) -> Tuple[Seq, float]:
    """
    argmax over the variant's feasible set of f(x, ȳ) + Δ(truth, ȳ)

    Args:
        scores: Chain scores of the truth's query
        truths: All ground truths of the query
        variant: Model variant, selects the predicate
        truth: The ground truth the loss is measured against
        max_expansions: Heap pops allowed
        query: Attached to SearchExhausted for reporting

    Returns:
        (sequence, augmented score)

    Raises:
        SearchExhausted: no feasible sequence within the search limits
    """
    augmented = loss_augment(scores, truth)
    result = list_viterbi(augmented, 1, predicate_for(variant, truths), max_expansions)
    if not result.items:
        raise SearchExhausted(
            f"no feasible {Variant(variant).value} sequence for query {query} after {result.expansions} expansions",
            partial=[],
            query=query,
        )
    return result.items[0]
