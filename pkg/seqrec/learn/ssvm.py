"""
Max-margin training of chain models with multiple ground truths

Every epoch runs loss-augmented inference once per (query, ground truth)
pair, then takes one projected subgradient step on the regularised hinge
objective. SP and SR differ only in the predicate the inference runs under.
"""

import math
import time
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from ..decoding.loss import most_violating
from ..features.joint import FeatureSpace, model_from_weights
from ..features.normalizer import fit_normalizer
from ..models.chain import chain_score
from ..models.errors import EmptyDataset, NonPositiveC
from ..models.schemas import Dataset, Model, Query, Variant
from ..utils.training_tracker import TrainingTracker

Seq = Tuple[int, ...]


class Formulation(str, Enum):
    N_SLACK = "N_SLACK"
    ONE_SLACK = "ONE_SLACK"


class TrainConfig(BaseModel):
    """结构化 SVM 训练配置"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    reg_c: float = Field(1.0, description="Regularisation constant C, must be positive")
    variant: Variant = Variant.SR
    max_epochs: int = Field(200, ge=1)
    tol: float = Field(1e-2, ge=0, description="Stop once every normalised violation is at most tol")
    seed: int = Field(0, description="Recorded with the run; full-batch epochs draw no randomness")
    formulation: Formulation = Formulation.N_SLACK
    max_expansions: int = Field(1_000_000, ge=1, description="Heap pops allowed per loss-augmented search")


@dataclass(frozen=True)
class _Example:
    index: int
    query: Query
    truths: Tuple[Seq, ...]


@dataclass
class _Constraint:
    """One generated constraint: truth y, violator ȳ and max_ȳ [f(ȳ) + Δ] - f(y)"""
    example: _Example
    truth: Seq
    violator: Seq
    margin: float

    @property
    def slack(self) -> float:
        return max(0.0, self.margin)


class StructuredSVMTrainer:
    """
    Projected subgradient trainer for the n-slack and 1-slack objectives

    n-slack:  ½‖w‖² + (C/N) Σ_ij max(0, max_ȳ [f(ȳ) + Δ(y_ij, ȳ)] - f(y_ij))
    1-slack:  ½‖w‖² + C · max(0, (1/N) Σ_ij [max_ȳ (f(ȳ) + Δ) - f(y_ij)])

    N counts (query, ground truth) pairs, so SP weights every replicated
    example equally.
    """

    def __init__(self, config: TrainConfig, tracker: Optional[TrainingTracker] = None):
        if not config.reg_c > 0:
            raise NonPositiveC(f"C must be positive, got {config.reg_c}")
        if not Variant(config.variant).is_structured:
            raise ValueError(f"variant {config.variant} is not a structured variant")
        self.config = config
        self.tracker = tracker or TrainingTracker(label=f"{Variant(config.variant).value} C={config.reg_c:g}")

    # ============ 约束生成 ============

    def _generate(self, space: FeatureSpace, w: np.ndarray, examples: List[_Example]) -> List[_Constraint]:
        variant = Variant(self.config.variant)
        constraints = []
        for example in examples:
            scores = space.chain_scores(w, example.query)
            for truth in example.truths:
                violator, augmented = most_violating(
                    scores, example.truths, variant, truth,
                    max_expansions=self.config.max_expansions,
                    query=example.query,
                )
                margin = augmented - chain_score(scores, truth)
                constraints.append(_Constraint(example, truth, violator, margin))
        return constraints

    def _objective(self, w: np.ndarray, constraints: List[_Constraint]) -> float:
        c = self.config.reg_c
        regulariser = 0.5 * float(w @ w)
        n = len(constraints)
        if self.config.formulation is Formulation.ONE_SLACK:
            margin = sum(con.margin for con in constraints) / n
            return regulariser + c * max(0.0, margin)
        return regulariser + c * sum(con.slack for con in constraints) / n

    def _max_violation(self, constraints: List[_Constraint]) -> float:
        """Largest slack per sequence position (1-slack: the aggregate slack)"""
        if self.config.formulation is Formulation.ONE_SLACK:
            mean_length = float(np.mean([con.example.query.length for con in constraints]))
            aggregate = max(0.0, sum(con.margin for con in constraints) / len(constraints))
            return aggregate / mean_length
        return max(con.slack / con.example.query.length for con in constraints)

    def _subgradient(self, space: FeatureSpace, constraints: List[_Constraint]) -> np.ndarray:
        """(1/N) Σ over active constraints of Ψ(x, ȳ) - Ψ(x, y)"""
        g = np.zeros(space.dimension)
        if self.config.formulation is Formulation.ONE_SLACK:
            # the whole sum is active once the aggregate is positive
            if sum(con.margin for con in constraints) <= 0:
                return g
            active = constraints
        else:
            active = [con for con in constraints if con.slack > 0]
        for con in active:
            query = con.example.query
            g += space.psi(query, con.violator) - space.psi(query, con.truth)
        return g / len(constraints)

    # ============ 训练循环 ============

    def fit(self, train: Dataset) -> Model:
        """
        训练结构化模型

        Args:
            train: Training dataset; queries shorter than 2 are skipped

        Returns:
            Model at convergence, else the iterate with the lowest objective

        Raises:
            EmptyDataset: no query of length >= 2
            SearchExhausted: loss-augmented inference found no feasible sequence
        """
        config = self.config
        usable = train.trainable()
        skipped = train.n_queries - usable.n_queries
        if skipped:
            logger.debug(f"Skipping {skipped} queries of length 1")
        if not usable.examples:
            raise EmptyDataset("no training query has length >= 2")

        meta = fit_normalizer(usable)
        space = FeatureSpace(usable.pois, meta)
        examples = [
            _Example(i, ex.query, tuple(t.pois for t in ex.trajectories))
            for i, ex in enumerate(usable.examples)
        ]
        l_max = max(ex.query.length for ex in examples)
        radius = math.sqrt(2.0 * config.reg_c * l_max)
        c = config.reg_c

        logger.info(
            f"Training {Variant(config.variant).value} ({config.formulation.value}) on "
            f"{len(examples)} queries / {usable.n_trajectories} truths, C={c:g}, dim={space.dimension}"
        )

        w = np.zeros(space.dimension)
        best_w, best_objective = w, math.inf
        for epoch in range(1, config.max_epochs + 1):
            started = time.perf_counter()
            constraints = self._generate(space, w, examples)
            objective = self._objective(w, constraints)
            violation = self._max_violation(constraints)
            looped = sum(1 for con in constraints if len(set(con.violator)) < len(con.violator))
            truths = sum(1 for con in constraints if con.violator in con.example.truths)

            if objective < best_objective:
                best_w, best_objective = w, objective

            # Pegasos step with λ = 1/C: w <- (1 - 1/t) w - (C/t) g, then project
            converged = violation <= config.tol
            if not converged:
                g = self._subgradient(space, constraints)
                w = (1.0 - 1.0 / epoch) * w - (c / epoch) * g
                norm = float(np.linalg.norm(w))
                if norm > radius:
                    w = w * (radius / norm)

            self.tracker.add_epoch(
                epoch=epoch,
                max_violation=violation,
                objective=objective,
                seconds=time.perf_counter() - started,
                looped_constraints=looped,
                ground_truth_constraints=truths,
            )
            if converged:
                self.tracker.converged = True
                best_w = w
                break

        if not self.tracker.converged:
            logger.warning(
                f"No convergence within {config.max_epochs} epochs "
                f"(violation {self.tracker.final.max_violation:.4f} > tol {config.tol}); "
                f"keeping the best iterate (objective {best_objective:.6f})"
            )
        else:
            logger.info(f"Converged after {len(self.tracker.epochs)} epochs")
        return model_from_weights(best_w, meta, Variant(config.variant), c)


def train_structured(train: Dataset, config: TrainConfig, tracker: Optional[TrainingTracker] = None) -> Model:
    """Train an SP / SR / SPpath / SRpath model"""
    return StructuredSVMTrainer(config, tracker).fit(train)
