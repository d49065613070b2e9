"""Loop-free path decoding: subset DP engine, LP exporter, engine selection"""

from .engine import DEFAULT_ILP_THRESHOLD, Engine, TopKResult, select_engine, top_k_paths
from .held_karp import DEFAULT_MAX_POIS, PathCut, SubsetDP, best_path_exact, top_k_paths_exact
from .lp_export import build_path_model, export_ilp

__all__ = [
    "DEFAULT_ILP_THRESHOLD",
    "Engine",
    "TopKResult",
    "select_engine",
    "top_k_paths",
    "DEFAULT_MAX_POIS",
    "PathCut",
    "SubsetDP",
    "best_path_exact",
    "top_k_paths_exact",
    "export_ilp",
    "build_path_model",
]
