"""Builders and brute-force oracles shared by the tests"""

import itertools
from typing import Callable, List, Optional, Sequence, Tuple

import mip
import numpy as np

from seqrec.models import ChainScores, Dataset, GroundTruthSet, Poi, PoiTable, Query, Trajectory, chain_score

Seq = Tuple[int, ...]


# ============ 构造器 ============

def make_table(
    categories: Sequence[str],
    coords: Optional[Sequence[Tuple[float, float]]] = None,
    popularity: Optional[Sequence[int]] = None,
    n_visits: Optional[Sequence[int]] = None,
    cluster_ids: Optional[Sequence[int]] = None,
    n_clusters: int = 1,
    n_bins: int = 2,
) -> PoiTable:
    """PoiTable built directly, bins all 0"""
    m = len(categories)
    coords = coords or [(0.01 * i, 0.0) for i in range(m)]
    popularity = popularity if popularity is not None else [1] * m
    n_visits = n_visits if n_visits is not None else [max(p, 1) for p in popularity]
    cluster_ids = cluster_ids or [0] * m
    pois = [
        Poi(
            id=i,
            source_id=str(100 + i),
            category=categories[i],
            lon=float(coords[i][0]),
            lat=float(coords[i][1]),
            popularity=int(popularity[i]),
            n_visits=int(n_visits[i]),
            cluster_id=int(cluster_ids[i]),
        )
        for i in range(m)
    ]
    return PoiTable(pois=pois, n_bins=n_bins, n_clusters=n_clusters)


def make_dataset(table: PoiTable, trajectories: Sequence[Sequence[int]]) -> Dataset:
    """Group trajectories by (start, length) the way ingest does"""
    groups = {}
    for seq in trajectories:
        seq = tuple(seq)
        groups.setdefault((seq[0], len(seq)), set()).add(seq)
    examples = [
        GroundTruthSet(query=Query(start=s, length=l), trajectories=[Trajectory(pois=t) for t in sorted(seqs)])
        for (s, l), seqs in sorted(groups.items())
    ]
    return Dataset(pois=table, examples=examples)


def random_scores(rng: np.random.Generator, m: int, l: int, start: Optional[int] = None) -> ChainScores:
    """Tied-free random chain: unary rows drawn independently per position"""
    start = int(rng.integers(m)) if start is None else start
    unary = rng.uniform(-1.0, 1.0, size=(l, m))
    unary[0] = np.finfo(np.float64).min
    unary[0, start] = 0.0
    pairwise = rng.uniform(-1.0, 1.0, size=(m, m))
    return ChainScores(unary=unary, pairwise=pairwise, start=start, length=l)


def random_tied_scores(rng: np.random.Generator, m: int, l: int, start: Optional[int] = None) -> ChainScores:
    """Random chain whose positions 2..l share one unary row"""
    start = int(rng.integers(m)) if start is None else start
    return ChainScores.from_tied(rng.uniform(-1.0, 1.0, size=m), rng.uniform(-1.0, 1.0, size=(m, m)), start, l)


# ============ 暴力枚举 ============

def all_sequences(m: int, l: int, start: int) -> List[Seq]:
    return [(start,) + tail for tail in itertools.product(range(m), repeat=l - 1)]


def all_paths(m: int, l: int, start: int) -> List[Seq]:
    return [s for s in all_sequences(m, l, start) if len(set(s)) == l]


def ranked(scores: ChainScores, candidates: Sequence[Seq],
           extra: Callable[[Seq], float] = lambda seq: 0.0) -> List[Tuple[Seq, float]]:
    """Candidates by non-increasing score, ties in lexicographic order"""
    scored = [(seq, chain_score(scores, seq) + extra(seq)) for seq in candidates]
    return sorted(scored, key=lambda item: (-item[1], item[0]))


def hamming_loss(truth: Sequence[int], seq: Sequence[int]) -> int:
    return sum(1 for a, b in zip(truth, seq) if a != b)


def tau_b_oracle(x: Sequence[float], y: Sequence[float]) -> float:
    """tau-b by pair enumeration with the tie-adjusted denominator"""
    n = len(x)
    concordant = discordant = 0
    tied_x = tied_y = tied_both = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = np.sign(x[i] - x[j])
            dy = np.sign(y[i] - y[j])
            if dx == 0 and dy == 0:
                tied_both += 1
            elif dx == 0:
                tied_x += 1
            elif dy == 0:
                tied_y += 1
            elif dx == dy:
                concordant += 1
            else:
                discordant += 1
    return (concordant - discordant) / np.sqrt((concordant + discordant + tied_x) * (concordant + discordant + tied_y))


def ranks_of(seq: Sequence[int], m: int) -> List[int]:
    ranks = [0] * m
    for j, p in enumerate(seq, start=1):
        ranks[p] = m - j + 1
    return ranks


# ============ ILP ============

def read_lp(path) -> mip.Model:
    """Load an LP file back into a python-mip model"""
    model = mip.Model(solver_name=mip.CBC)
    model.verbose = 0
    model.read(str(path))
    return model


def solved_path(model: mip.Model, m: int, start: int) -> Seq:
    """Optimise a path model with CBC and follow the chosen u_j_k arcs from the start"""
    assert model.optimize() == mip.OptimizationStatus.OPTIMAL
    path = [start]
    while True:
        nxt = [k for k in range(m) if model.var_by_name(f"u_{path[-1]}_{k}").x >= 0.99]
        if not nxt:
            return tuple(path)
        path.append(nxt[0])
