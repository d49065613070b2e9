"""
Method adapters for the evaluation protocol

A method is a trainer plus a predictor: ``fit`` turns a training set and a C
into a fitted state, ``predict`` turns that state into ranked trajectories.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, List, Optional

from ..learn.baselines import baseline_popularity, baseline_random
from ..learn.predict import predict_topk
from ..learn.rank_svm import train_poirank
from ..learn.ssvm import Formulation, TrainConfig, train_structured
from ..models.schemas import Dataset, PoiTable, Query, Trajectory, Variant
from ..pathopt.engine import DEFAULT_ILP_THRESHOLD
from ..pathopt.held_karp import DEFAULT_MAX_POIS


@dataclass(frozen=True)
class DecodeOptions:
    """Engine routing shared by every predicting method"""
    threshold: int = DEFAULT_ILP_THRESHOLD
    max_expansions: int = 1_000_000
    max_pois: int = DEFAULT_MAX_POIS


class Method(ABC):
    """Trainer + predictor pair"""

    name: str = "method"
    tunable: bool = False

    def __init__(self, decode: Optional[DecodeOptions] = None):
        self.decode = decode or DecodeOptions()

    @abstractmethod
    def fit(self, train: Dataset, reg_c: float, seed: int) -> Any:
        """Fit on training examples; the result is handed back to predict"""

    @abstractmethod
    def predict(self, state: Any, query: Query, k: int, table: PoiTable, seed: int) -> List[Trajectory]:
        """Ranked trajectories for one query, at most k"""

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r})"


class RandomMethod(Method):
    name = "random"

    def fit(self, train: Dataset, reg_c: float, seed: int) -> Any:
        return None

    def predict(self, state, query, k, table, seed):
        return baseline_random(query, k, seed, table)


class PopularityMethod(Method):
    name = "popularity"

    def fit(self, train: Dataset, reg_c: float, seed: int) -> Any:
        return train

    def predict(self, state, query, k, table, seed):
        o = self.decode
        return baseline_popularity(state, query, k, o.threshold, o.max_expansions, o.max_pois).trajectories


class PoiRankMethod(Method):
    name = "poirank"
    tunable = True

    def fit(self, train: Dataset, reg_c: float, seed: int) -> Any:
        return train_poirank(train, reg_c)

    def predict(self, state, query, k, table, seed):
        o = self.decode
        return predict_topk(state, query, k, table, o.threshold, o.max_expansions, o.max_pois).trajectories


class StructuredMethod(Method):
    """SP / SR / SPpath / SRpath"""

    tunable = True

    def __init__(
        self,
        variant: Variant,
        max_epochs: int = 200,
        tol: float = 1e-2,
        formulation: Formulation = Formulation.N_SLACK,
        decode: Optional[DecodeOptions] = None,
    ):
        super().__init__(decode)
        self.variant = Variant(variant)
        if not self.variant.is_structured:
            raise ValueError(f"{self.variant.value} is not a structured variant")
        self.max_epochs = max_epochs
        self.tol = tol
        self.formulation = formulation
        self.name = self.variant.value.lower()

    def fit(self, train: Dataset, reg_c: float, seed: int) -> Any:
        config = TrainConfig(
            reg_c=reg_c,
            variant=self.variant,
            max_epochs=self.max_epochs,
            tol=self.tol,
            seed=seed,
            formulation=self.formulation,
            max_expansions=self.decode.max_expansions,
        )
        return train_structured(train, config)

    def predict(self, state, query, k, table, seed):
        o = self.decode
        return predict_topk(state, query, k, table, o.threshold, o.max_expansions, o.max_pois).trajectories


METHOD_NAMES = ("random", "popularity", "poirank", "sp", "sr", "sppath", "srpath")


def make_method(
    name: str,
    decode: Optional[DecodeOptions] = None,
    max_epochs: int = 200,
    tol: float = 1e-2,
    formulation: Formulation = Formulation.N_SLACK,
) -> Method:
    """Build a method adapter from its command-line name"""
    key = name.strip().lower()
    if key == "random":
        return RandomMethod(decode)
    if key == "popularity":
        return PopularityMethod(decode)
    if key == "poirank":
        return PoiRankMethod(decode)
    variants = {"sp": Variant.SP, "sr": Variant.SR, "sppath": Variant.SPPATH, "srpath": Variant.SRPATH}
    if key in variants:
        return StructuredMethod(variants[key], max_epochs, tol, formulation, decode)
    raise ValueError(f"unknown method {name!r}; expected one of {', '.join(METHOD_NAMES)}")
