"""Joint feature map Ψ(x, y), weight packing and chain-score construction"""

from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..models.chain import ChainScores
from ..models.errors import NonConforming
from ..models.schemas import FeatureMeta, Model, PoiTable, Query, Trajectory, Variant
from .normalizer import check_meta
from .pairwise import pairwise_score_matrix, pairwise_values
from .unary import unary_feature_matrix


# ============ 权重打包 ============

def feature_dimension(meta: FeatureMeta) -> int:
    return meta.n_unary + meta.n_pairwise


def pack_weights(model: Model) -> np.ndarray:
    """Flatten a model to w = [unary weights | pairwise tables, row-major, factor order]"""
    parts = [np.asarray(model.unary_weights, dtype=np.float64)]
    parts += [table.ravel() for table in model.pairwise_arrays()]
    return np.concatenate(parts)


def unpack_weights(w: np.ndarray, meta: FeatureMeta) -> Tuple[np.ndarray, List[np.ndarray]]:
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (feature_dimension(meta),):
        raise ValueError(f"weight vector has shape {w.shape}, expected ({feature_dimension(meta)},)")
    unary = w[:meta.n_unary]
    tables = []
    offset = meta.n_unary
    for card in meta.pairwise_cardinalities:
        tables.append(w[offset:offset + card * card].reshape(card, card))
        offset += card * card
    return unary, tables


def model_from_weights(w: np.ndarray, meta: FeatureMeta, variant: Variant, reg_c: float) -> Model:
    unary, tables = unpack_weights(w, meta)
    return Model(
        variant=variant,
        reg_c=reg_c,
        feature_meta=meta,
        unary_weights=[float(x) for x in unary],
        pairwise_weights=[[[float(x) for x in row] for row in table] for table in tables],
    )


def zero_model(meta: FeatureMeta, variant: Variant = Variant.SP, reg_c: float = 1.0) -> Model:
    return model_from_weights(np.zeros(feature_dimension(meta)), meta, variant, reg_c)


# ============ 特征缓存 ============

class FeatureSpace:
    """
    Features of one POI table under one FeatureMeta

    Unary matrices are cached per query; the pairwise value table is shared.
    """

    def __init__(self, table: PoiTable, meta: FeatureMeta):
        check_meta(meta, table)
        self.table = table
        self.meta = meta
        self.values = pairwise_values(table, meta)
        self._unary: Dict[Query, np.ndarray] = {}

    @property
    def dimension(self) -> int:
        return feature_dimension(self.meta)

    def unary_matrix(self, query: Query) -> np.ndarray:
        if query not in self._unary:
            self._unary[query] = unary_feature_matrix(query, self.table, self.meta)
        return self._unary[query]

    def psi(self, query: Query, seq: Sequence[int]) -> np.ndarray:
        """Ψ(x, y) for a conforming sequence"""
        seq = [int(p) for p in seq]
        if len(seq) != query.length or not seq or seq[0] != query.start:
            raise NonConforming(f"sequence {seq} does not conform to query {query}")

        unary = self.unary_matrix(query)[seq].sum(axis=0)
        blocks = [unary]
        for f, card in enumerate(self.meta.pairwise_cardinalities):
            counts = np.zeros((card, card))
            v = self.values[seq, f]
            np.add.at(counts, (v[:-1], v[1:]), 1.0)
            blocks.append(counts.ravel())
        return np.concatenate(blocks)

    def chain_scores(self, w: np.ndarray, query: Query) -> ChainScores:
        """ChainScores of w for one query; positions 2..l share the unary row"""
        unary_w, tables = unpack_weights(w, self.meta)
        row = self.unary_matrix(query) @ unary_w
        pairwise = pairwise_score_matrix(tables, self.values)
        return ChainScores.from_tied(row, pairwise, query.start, query.length, offset=float(row[query.start]))


# ============ 对外接口 ============

def joint_feature_map(query: Query, trajectory: Trajectory, table: PoiTable, meta: FeatureMeta) -> np.ndarray:
    """
    Ψ(x, y) = [Σ_j ψ(x, y_j) | flattened pairwise transition counts per factor]

    Raises:
        NonConforming: y does not start at x.start or has the wrong length
    """
    return FeatureSpace(table, meta).psi(query, trajectory.pois)


def score_trajectory(model: Model, query: Query, trajectory: Trajectory, table: PoiTable) -> float:
    """f(x, y) summed factor by factor, without building Ψ"""
    if not trajectory.conforms_to(query):
        raise NonConforming(f"{list(trajectory.pois)} does not conform to query {query}")
    space = FeatureSpace(table, model.feature_meta)
    unary = space.unary_matrix(query) @ np.asarray(model.unary_weights)
    tables = model.pairwise_arrays()
    seq = trajectory.pois
    total = float(sum(unary[p] for p in seq))
    for a, b in zip(seq[:-1], seq[1:]):
        total += sum(float(t[space.values[a, f], space.values[b, f]]) for f, t in enumerate(tables))
    return total


def build_chain_scores(model: Model, query: Query, table: PoiTable) -> ChainScores:
    """Materialise the decoder tables of a model for one query"""
    space = FeatureSpace(table, model.feature_meta)
    return space.chain_scores(pack_weights(model), query)
