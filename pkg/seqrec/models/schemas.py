"""Pydantic data models shared by every seqrec module"""

from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


MODEL_FORMAT_VERSION = 1


class Variant(str, Enum):
    """Structured model variants plus the unary-only ranking baseline"""
    SP = "SP"
    SR = "SR"
    SPPATH = "SPpath"
    SRPATH = "SRpath"
    POIRANK = "POIRANK"

    @property
    def is_structured(self) -> bool:
        return self is not Variant.POIRANK

    @property
    def requires_path(self) -> bool:
        return self in (Variant.SPPATH, Variant.SRPATH)


# ============ POI 模型 ============

class Poi(BaseModel):
    """单个 POI 及其统计量"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    id: int = Field(..., ge=0, description="Dense 0-based identifier assigned at ingest")
    source_id: str = Field(..., description="Identifier as it appears in the POI file")
    category: str = Field(..., description="Categorical label")
    lon: float = Field(..., description="Longitude in degrees")
    lat: float = Field(..., description="Latitude in degrees")
    popularity: int = Field(0, ge=0, description="Distinct users visiting this POI")
    n_visits: int = Field(0, ge=0, description="Total visit records")
    avg_duration: float = Field(0.0, ge=0, description="Average visit duration in seconds")
    cluster_id: int = Field(0, ge=0, description="Spatial cluster label")
    pop_bin: int = Field(0, ge=0)
    visit_bin: int = Field(0, ge=0)
    duration_bin: int = Field(0, ge=0)


class PoiTable(BaseModel):
    """POI universe plus the discretisation it was built with"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    pois: List[Poi] = Field(default_factory=list, description="POIs ordered by id")
    n_bins: int = Field(5, ge=1, description="Bin count B used for pop/visit/duration bins")
    n_clusters: int = Field(1, ge=1, description="Cluster count actually used")
    centroids: List[List[float]] = Field(default_factory=list, description="Cluster centroids as [lon, lat]")
    pop_edges: List[float] = Field(default_factory=list)
    visit_edges: List[float] = Field(default_factory=list)
    duration_edges: List[float] = Field(default_factory=list)

    @property
    def m(self) -> int:
        return len(self.pois)

    def __len__(self) -> int:
        return len(self.pois)

    def __getitem__(self, poi_id: int) -> Poi:
        return self.pois[poi_id]

    def __contains__(self, poi_id: object) -> bool:
        return isinstance(poi_id, (int, np.integer)) and 0 <= int(poi_id) < len(self.pois)

    def column(self, name: str) -> np.ndarray:
        """Return one numeric POI attribute as an array indexed by POI id"""
        return np.array([getattr(p, name) for p in self.pois], dtype=np.float64)

    def categories(self) -> List[str]:
        return [p.category for p in self.pois]

    def lookup_source(self, source_id: str) -> Optional[Poi]:
        for poi in self.pois:
            if poi.source_id == source_id:
                return poi
        return None


# ============ Query / Trajectory ============

class Query(BaseModel):
    """查询 x = (start, length)"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    start: int = Field(..., ge=0, description="Start POI id")
    length: int = Field(..., ge=1, description="Requested trajectory length")

    def __str__(self) -> str:
        return f"({self.start}, {self.length})"


class Trajectory(BaseModel):
    """有序 POI 序列 y"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    pois: Tuple[int, ...] = Field(..., description="Ordered POI ids")

    def __len__(self) -> int:
        return len(self.pois)

    def __getitem__(self, index):
        return self.pois[index]

    def __lt__(self, other: "Trajectory") -> bool:
        return self.pois < other.pois

    @property
    def start(self) -> int:
        return self.pois[0]

    @property
    def is_path(self) -> bool:
        return len(set(self.pois)) == len(self.pois)

    def conforms_to(self, query: Query) -> bool:
        return len(self.pois) == query.length and len(self.pois) > 0 and self.pois[0] == query.start

    @classmethod
    def of(cls, *pois: int) -> "Trajectory":
        return cls(pois=tuple(int(p) for p in pois))


class Visit(BaseModel):
    """One visit record kept for re-deriving POI statistics on a training subset"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    user_id: str
    poi: int = Field(..., ge=0, description="Dense POI id")
    duration: Optional[float] = Field(None, ge=0, description="Seconds, None when the corpus has no timestamps")


class GroundTruthSet(BaseModel):
    """一个查询及其全部观测轨迹"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    query: Query
    trajectories: List[Trajectory] = Field(..., description="Observed trajectories, lexicographically sorted")
    visits: List[Visit] = Field(
        default_factory=list,
        description="Visit records of every source trajectory of this query, duplicates included",
    )

    @property
    def n(self) -> int:
        return len(self.trajectories)


class Dataset(BaseModel):
    """POI 表加上按查询分组的样本"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    pois: PoiTable
    examples: List[GroundTruthSet] = Field(default_factory=list)

    @property
    def n_queries(self) -> int:
        return len(self.examples)

    @property
    def n_trajectories(self) -> int:
        return sum(ex.n for ex in self.examples)

    @property
    def has_visits(self) -> bool:
        return any(ex.visits for ex in self.examples)

    def subset(self, indices) -> "Dataset":
        """
        Dataset restricted to the examples at the given positions (order kept)

        The POI table is carried over unchanged; preprocessing.training_view
        re-derives it from the kept visits.
        """
        return Dataset(pois=self.pois, examples=[self.examples[i] for i in indices])

    def without(self, index: int) -> "Dataset":
        return self.subset(i for i in range(len(self.examples)) if i != index)

    def trainable(self) -> "Dataset":
        """Examples usable for training and evaluation (length ≥ 2)"""
        return Dataset(pois=self.pois, examples=[ex for ex in self.examples if ex.query.length >= 2])


# ============ 特征元数据与模型 ============

class FeatureMeta(BaseModel):
    """Feature-space metadata needed to rebuild features for a trained model"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    categories: List[str] = Field(..., description="Category vocabulary, index order")
    n_clusters: int = Field(..., ge=1)
    centroids: List[List[float]] = Field(default_factory=list)
    n_bins: int = Field(..., ge=1)
    pop_edges: List[float] = Field(default_factory=list)
    visit_edges: List[float] = Field(default_factory=list)
    duration_edges: List[float] = Field(default_factory=list)
    unary_names: List[str] = Field(..., description="Name of every unary feature dimension")
    means: List[float] = Field(..., description="Standardisation means per unary dimension")
    stds: List[float] = Field(..., description="Standardisation stds per unary dimension (never 0)")
    pairwise_features: List[str] = Field(..., description="Pairwise factor names, weight-table order")
    pairwise_cardinalities: List[int] = Field(..., description="Value count per pairwise factor")

    @property
    def n_unary(self) -> int:
        return len(self.unary_names)

    @property
    def n_pairwise(self) -> int:
        return sum(c * c for c in self.pairwise_cardinalities)

    @model_validator(mode="after")
    def _check_lengths(self) -> "FeatureMeta":
        if not (len(self.means) == len(self.stds) == len(self.unary_names)):
            raise ValueError("means, stds and unary_names must have equal length")
        if len(self.pairwise_features) != len(self.pairwise_cardinalities):
            raise ValueError("pairwise_features and pairwise_cardinalities must have equal length")
        return self


class Model(BaseModel):
    """Trained weights w with the metadata to score new queries"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    version: int = Field(MODEL_FORMAT_VERSION, description="Model file format version")
    variant: Variant
    reg_c: float = Field(..., gt=0, description="Regularisation constant C")
    feature_meta: FeatureMeta
    unary_weights: List[float] = Field(..., description="One weight per unary dimension, tied across positions")
    pairwise_weights: List[List[List[float]]] = Field(
        ...,
        description="Per pairwise factor a [value]x[value] weight table, tied across positions",
    )

    @model_validator(mode="after")
    def _check_dimensions(self) -> "Model":
        meta = self.feature_meta
        if len(self.unary_weights) != meta.n_unary:
            raise ValueError(f"unary_weights has {len(self.unary_weights)} entries, feature_meta expects {meta.n_unary}")
        if len(self.pairwise_weights) != len(meta.pairwise_cardinalities):
            raise ValueError("one pairwise weight table per pairwise feature is required")
        for name, card, table in zip(meta.pairwise_features, meta.pairwise_cardinalities, self.pairwise_weights):
            if len(table) != card or any(len(row) != card for row in table):
                raise ValueError(f"pairwise table {name!r} must be {card}x{card}")
        return self

    def pairwise_arrays(self) -> List[np.ndarray]:
        return [np.asarray(t, dtype=np.float64).reshape(c, c)
                for t, c in zip(self.pairwise_weights, self.feature_meta.pairwise_cardinalities)]


class Violation(BaseModel):
    """One broken dataset invariant"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    rule: str = Field(..., description="Short rule identifier")
    example: Optional[int] = Field(None, description="Index of the offending example, None for table-level rules")
    detail: str = ""


class DatasetSummary(BaseModel):
    """Corpus statistics printed by the ingest command"""
    model_config = ConfigDict(extra="forbid")

    n_trajectories: int
    n_pois: int
    n_queries: int
    n_trainable_queries: int = Field(..., description="Queries with length >= 2")
    gt_buckets: Dict[str, int] = Field(default_factory=dict, description="Query count by ground-truth count")
    n_short: int = Field(0, description="Trajectories shorter than the short threshold")
    n_long: int = 0

    def line(self) -> str:
        return f"traj={self.n_trajectories} pois={self.n_pois} queries={self.n_queries}"


class IngestConfig(BaseModel):
    """Corpus ingest options"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    n_clusters: int = Field(5, ge=1, description="Requested k-means cluster count")
    n_bins: int = Field(5, ge=2, description="Quantile bin count B")
    rng_seed: int = Field(0, description="Seed for k-means initialisation")
