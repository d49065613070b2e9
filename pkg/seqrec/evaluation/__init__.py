"""Metrics, method adapters, leave-one-query-out protocol and report writers"""

from .methods import (
    METHOD_NAMES,
    DecodeOptions,
    Method,
    PoiRankMethod,
    PopularityMethod,
    RandomMethod,
    StructuredMethod,
    make_method,
)
from .metrics import f1_pairs, f1_points, kendall_tau_b, kendall_tau_b_pairs, ordered_pairs, position_ranks
from .protocol import (
    DEFAULT_C_GRID,
    METRICS,
    FoldResult,
    MetricReport,
    MetricSummary,
    MonteCarloConfig,
    QueryFailure,
    QueryScore,
    best_of_top_k,
    build_report,
    evaluate_fold,
    evaluate_loqo,
    evaluate_loqo_async,
    evaluate_loqo_multi,
    fold_seed,
    summarize,
    tune_c,
    validation_score,
)
from .report import REPORT_COLUMNS, report_frame, summary_dict, write_report, write_report_csv

__all__ = [
    "METHOD_NAMES",
    "DecodeOptions",
    "Method",
    "PoiRankMethod",
    "PopularityMethod",
    "RandomMethod",
    "StructuredMethod",
    "make_method",
    "f1_pairs",
    "f1_points",
    "kendall_tau_b",
    "kendall_tau_b_pairs",
    "ordered_pairs",
    "position_ranks",
    "DEFAULT_C_GRID",
    "METRICS",
    "FoldResult",
    "MetricReport",
    "MetricSummary",
    "MonteCarloConfig",
    "QueryFailure",
    "QueryScore",
    "best_of_top_k",
    "build_report",
    "evaluate_fold",
    "evaluate_loqo",
    "evaluate_loqo_async",
    "evaluate_loqo_multi",
    "fold_seed",
    "summarize",
    "tune_c",
    "validation_score",
    "REPORT_COLUMNS",
    "report_frame",
    "summary_dict",
    "write_report",
    "write_report_csv",
]
