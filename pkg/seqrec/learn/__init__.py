"""Model training and prediction: structured SVM, RankSVM, baselines"""

from .baselines import baseline_popularity, baseline_random, popularity_chain_scores
from .predict import model_chain_scores, poirank_chain_scores, predict_topk
from .rank_svm import RankPairSet, build_rank_pairs, fit_squared_hinge_rank, train_poirank
from .ssvm import Formulation, StructuredSVMTrainer, TrainConfig, train_structured

__all__ = [
    "baseline_popularity",
    "baseline_random",
    "popularity_chain_scores",
    "model_chain_scores",
    "poirank_chain_scores",
    "predict_topk",
    "RankPairSet",
    "build_rank_pairs",
    "fit_squared_hinge_rank",
    "train_poirank",
    "Formulation",
    "StructuredSVMTrainer",
    "TrainConfig",
    "train_structured",
]
