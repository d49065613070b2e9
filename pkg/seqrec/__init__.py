"""
seqrec - structured trajectory recommendation

Max-margin chain models trained with multiple ground truths per query,
decoded into loop-free top-k paths.
"""

__version__ = "0.1.0"
