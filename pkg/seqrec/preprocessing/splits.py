"""Monte Carlo train/validation splits over whole ground-truth sets"""

import math
from typing import Iterable, List, Tuple

import numpy as np

from ..models.errors import TooFewExamples
from ..models.schemas import Dataset
from .poi_stats import refit_stats, visit_frame


def train_size(n: int, train_frac: float) -> int:
    # floor, but never empty on either side
    return min(max(math.floor(train_frac * n + 1e-9), 1), n - 1)


def training_view(dataset: Dataset, indices: Iterable[int]) -> Dataset:
    """
    Examples at ``indices`` with POI statistics recomputed from their visits

    Popularity, visit counts, durations and their bins then describe the
    training examples only. A dataset assembled without visit records keeps
    its table as given.
    """
    part = dataset.subset(list(indices))
    if not dataset.has_visits:
        return part
    return Dataset(pois=refit_stats(dataset.pois, visit_frame(part.examples)), examples=part.examples)


def split_monte_carlo(dataset: Dataset, train_frac: float, repeats: int, seed: int) -> List[Tuple[Dataset, Dataset]]:
    """
    Repeated random partitions of the examples

    Args:
        dataset: Dataset to split
        train_frac: Fraction of examples in each training part, in (0, 1)
        repeats: Number of independent splits
        seed: Seed for numpy's default_rng

    Returns:
        List of (train, validation) pairs; both keep dataset order. Both
        carry the POI table of the training part.
    """
    n = dataset.n_queries
    if n < 2:
        raise TooFewExamples(f"Monte Carlo split needs at least 2 examples, got {n}")
    if not 0.0 < train_frac < 1.0:
        raise ValueError(f"train_frac must lie in (0, 1), got {train_frac}")

    rng = np.random.default_rng(seed)
    n_train = train_size(n, train_frac)
    splits = []
    for _ in range(repeats):
        order = rng.permutation(n)
        train = training_view(dataset, sorted(int(i) for i in order[:n_train]))
        valid_idx = sorted(int(i) for i in order[n_train:])
        validation = Dataset(pois=train.pois, examples=[dataset.examples[i] for i in valid_idx])
        splits.append((train, validation))
    return splits
