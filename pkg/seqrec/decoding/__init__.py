"""Chain decoders: forward-backward, Viterbi, serial list Viterbi, loss augmentation"""

from .forward_backward import DecodeTables, complete_greedy, forward_backward, viterbi
from .list_viterbi import (
    HeapEntry,
    ListViterbiResult,
    PredicateKind,
    SequencePredicate,
    iter_ranked,
    list_viterbi,
    loop_bound,
)
from .loss import hamming, loss_augment, most_violating, predicate_for

__all__ = [
    "DecodeTables",
    "forward_backward",
    "complete_greedy",
    "viterbi",
    "HeapEntry",
    "ListViterbiResult",
    "PredicateKind",
    "SequencePredicate",
    "iter_ranked",
    "list_viterbi",
    "loop_bound",
    "hamming",
    "loss_augment",
    "most_violating",
    "predicate_for",
]
