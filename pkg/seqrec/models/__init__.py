"""Domain models for seqrec"""

from .chain import NEG_INF, ChainScores, chain_score, clamp, start_row
from .errors import (
    DegenerateClustering,
    DegenerateDenominator,
    EmptyDataset,
    Infeasible,
    NonConforming,
    NonPositiveC,
    NoPairs,
    ParseError,
    SearchExhausted,
    SeqRecError,
    TooFewExamples,
    TooLarge,
    UnknownPoi,
)
from .schemas import (
    MODEL_FORMAT_VERSION,
    Dataset,
    DatasetSummary,
    IngestConfig,
    FeatureMeta,
    GroundTruthSet,
    Model,
    Poi,
    PoiTable,
    Query,
    Trajectory,
    Variant,
    Violation,
    Visit,
)
from .validation import validate_dataset

__all__ = [
    # Chain
    "NEG_INF",
    "ChainScores",
    "chain_score",
    "clamp",
    "start_row",
    # Errors
    "SeqRecError",
    "ParseError",
    "UnknownPoi",
    "TooFewExamples",
    "EmptyDataset",
    "DegenerateClustering",
    "NonConforming",
    "SearchExhausted",
    "Infeasible",
    "TooLarge",
    "NonPositiveC",
    "NoPairs",
    "DegenerateDenominator",
    # Schemas
    "MODEL_FORMAT_VERSION",
    "Variant",
    "Poi",
    "PoiTable",
    "Query",
    "Trajectory",
    "Visit",
    "GroundTruthSet",
    "Dataset",
    "DatasetSummary",
    "IngestConfig",
    "FeatureMeta",
    "Model",
    "Violation",
    # Validation
    "validate_dataset",
]
