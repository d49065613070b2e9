"""
Leave-one-query-out evaluation with Monte Carlo tuning of C

Folds run concurrently in worker threads; each derives its randomness from
(seed, fold index) only, and results are assembled in dataset order.
"""

import asyncio
import math
import time
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from ..models.errors import SeqRecError, TooFewExamples
from ..models.schemas import Dataset, GroundTruthSet, Trajectory
from ..preprocessing.splits import split_monte_carlo, training_view
from .methods import Method
from .metrics import f1_pairs, f1_points, kendall_tau_b

METRICS = ("f1_points", "f1_pairs", "tau_b")
DEFAULT_C_GRID = (1e-2, 1e-1, 1.0, 10.0, 1e2, 1e3)


# ============ 配置与结果模型 ============

class MonteCarloConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    train_frac: float = Field(0.8, gt=0, lt=1)
    repeats: int = Field(5, ge=1)


class QueryScore(BaseModel):
    """Best-of-top-k metrics of one held-out query"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    query_id: int = Field(..., description="Index of the query in the dataset")
    start: int
    length: int
    reg_c: Optional[float] = Field(None, description="C used for the final fit, None for untuned methods")
    f1_points: float
    f1_pairs: float
    tau_b: float


class MetricSummary(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    mean: Optional[float] = Field(None, description="None when no query contributed")
    sem: Optional[float] = Field(None, description="Sample std / sqrt(n), 0 for n = 1")
    n: int


class QueryFailure(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    query_id: int
    error: str


class MetricReport(BaseModel):
    """Per-query best-of-top-k scores and their aggregates for one (method, k)"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    method: str
    k: int
    scores: List[QueryScore] = Field(default_factory=list)
    failures: List[QueryFailure] = Field(default_factory=list)
    aggregates: Dict[str, MetricSummary] = Field(default_factory=dict)
    short: Dict[str, MetricSummary] = Field(default_factory=dict, description="Queries shorter than the threshold")
    long: Dict[str, MetricSummary] = Field(default_factory=dict)
    short_threshold: int = 5


class FoldResult(BaseModel):
    """All k values of one held-out query, derived from one top-max(k) prediction"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    query_id: int
    reg_c: Optional[float] = None
    by_k: Dict[int, Dict[str, float]] = Field(default_factory=dict)
    error: Optional[str] = None


# ============ 指标聚合 ============

def best_of_top_k(
    truths: Sequence[Trajectory],
    predictions: Sequence[Trajectory],
    m: int,
) -> Dict[str, float]:
    """Each metric maximised independently over (ground truth x prediction)"""
    if not predictions:
        raise ValueError("no predictions to score")
    best = {name: -math.inf for name in METRICS}
    for truth in truths:
        for pred in predictions:
            best["f1_points"] = max(best["f1_points"], f1_points(truth, pred))
            best["f1_pairs"] = max(best["f1_pairs"], f1_pairs(truth, pred))
            best["tau_b"] = max(best["tau_b"], kendall_tau_b(truth, pred, m))
    return best


def summarize(values: Sequence[float]) -> MetricSummary:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 0:
        return MetricSummary(n=0)
    sem = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else 0.0
    return MetricSummary(mean=float(arr.mean()), sem=sem, n=int(arr.size))


def _aggregate(scores: Sequence[QueryScore]) -> Dict[str, MetricSummary]:
    return {name: summarize([getattr(s, name) for s in scores]) for name in METRICS}


def build_report(
    method: str,
    k: int,
    scores: List[QueryScore],
    failures: List[QueryFailure],
    short_threshold: int = 5,
) -> MetricReport:
    return MetricReport(
        method=method,
        k=k,
        scores=scores,
        failures=failures,
        aggregates=_aggregate(scores),
        short=_aggregate([s for s in scores if s.length < short_threshold]),
        long=_aggregate([s for s in scores if s.length >= short_threshold]),
        short_threshold=short_threshold,
    )


# ============ C 调参 ============

def fold_seed(seed: int, index: int) -> int:
    """Seed of one fold, independent of scheduling"""
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def validation_score(method: Method, state, validation: Dataset, seed: int) -> float:
    """Mean top-1 f1_points over validation queries of length >= 2"""
    table = validation.pois
    values = []
    for example in validation.trainable().examples:
        preds = method.predict(state, example.query, 1, table, seed)
        values.append(max(f1_points(t, p) for t in example.trajectories for p in preds))
    return float(np.mean(values)) if values else float("nan")


def tune_c(
    method: Method,
    train: Dataset,
    c_grid: Sequence[float],
    mc: MonteCarloConfig,
    seed: int,
) -> float:
    """
    Pick the C with the best mean validation f1_points over Monte Carlo splits

    Ties go to the smaller C. A C whose training fails on some split scores
    that split as 0.

    Raises:
        TooFewExamples: fewer than 2 examples to split
    """
    grid = sorted(float(c) for c in c_grid)
    if len(grid) == 1:
        return grid[0]
    splits = split_monte_carlo(train, mc.train_frac, mc.repeats, seed)
    best_c, best_value = grid[0], -math.inf
    for c in grid:
        values = []
        for repeat, (fit_part, validation) in enumerate(splits):
            try:
                state = method.fit(fit_part, c, seed)
                value = validation_score(method, state, validation, seed)
            except SeqRecError as e:
                logger.debug(f"[{method.name}] C={c:g} split {repeat} failed: {e}")
                value = 0.0
            if not math.isnan(value):
                values.append(value)
        mean = float(np.mean(values)) if values else -math.inf
        logger.debug(f"[{method.name}] C={c:g} validation f1_points={mean:.4f}")
        if mean > best_value:
            best_c, best_value = c, mean
    return best_c


# ============ LOQO ============

def evaluate_fold(
    dataset: Dataset,
    index: int,
    method: Method,
    ks: Sequence[int],
    c_grid: Sequence[float],
    mc: MonteCarloConfig,
    seed: int,
    reg_c: Optional[float] = None,
) -> FoldResult:
    """
    Hold out one query, tune and fit on the rest, score best-of-top-k for every k

    The top-max(k) list is predicted once; each k scores its prefix.
    """
    held: GroundTruthSet = dataset.examples[index]
    # POI statistics of the fold come from the remaining queries only
    train = training_view(dataset, (i for i in range(dataset.n_queries) if i != index))
    seed_i = fold_seed(seed, index)

    chosen: Optional[float] = None
    if method.tunable:
        chosen = reg_c
        if chosen is None:
            try:
                chosen = tune_c(method, train, c_grid, mc, seed_i)
            except TooFewExamples as e:
                chosen = float(sorted(c_grid)[len(c_grid) // 2])
                logger.warning(f"[{method.name}] query {index}: {e}; using C={chosen:g}")
    state = method.fit(train, chosen if chosen is not None else 1.0, seed_i)

    k_max = max(ks)
    predictions = method.predict(state, held.query, k_max, train.pois, seed_i)
    by_k = {k: best_of_top_k(held.trajectories, predictions[:k], dataset.pois.m) for k in ks}
    return FoldResult(query_id=index, reg_c=chosen, by_k=by_k)


async def evaluate_loqo_async(
    dataset: Dataset,
    method: Method,
    ks: Sequence[int],
    c_grid: Sequence[float] = DEFAULT_C_GRID,
    mc: Optional[MonteCarloConfig] = None,
    seed: int = 0,
    threads: int = 4,
    reg_c: Optional[float] = None,
    short_threshold: int = 5,
) -> Dict[int, MetricReport]:
    """
    异步 LOQO 评估, one report per k

    Args:
        dataset: Full dataset; queries of length 1 are not held out
        method: Trainer + predictor
        ks: Top-k sizes to report
        c_grid: Candidate C values for tunable methods
        mc: Monte Carlo split configuration
        seed: Root seed
        threads: Concurrent folds
        reg_c: Fixed C that skips tuning
        short_threshold: Length below which a query counts as short

    Returns:
        {k: MetricReport}

    Raises:
        TooFewExamples: dataset has fewer than 2 examples
    """
    if dataset.n_queries < 2:
        raise TooFewExamples(f"leave-one-query-out needs at least 2 queries, got {dataset.n_queries}")
    ks = sorted(set(int(k) for k in ks))
    if not ks or ks[0] < 1:
        raise ValueError(f"k values must be >= 1, got {ks}")
    mc = mc or MonteCarloConfig()
    folds = [i for i, ex in enumerate(dataset.examples) if ex.query.length >= 2]
    semaphore = asyncio.Semaphore(max(1, threads))

    logger.info(f"LOQO [{method.name}] over {len(folds)} queries, k={ks}, threads={threads}")
    started = time.perf_counter()

    async def run_fold(index: int) -> FoldResult:
        async with semaphore:
            try:
                return await asyncio.to_thread(
                    evaluate_fold, dataset, index, method, ks, c_grid, mc, seed, reg_c
                )
            except Exception as e:
                logger.warning(f"⚠️ [{method.name}] query {index} failed: {type(e).__name__}: {e}")
                return FoldResult(query_id=index, error=f"{type(e).__name__}: {e}")

    results = await asyncio.gather(*(run_fold(i) for i in folds))

    failures = [QueryFailure(query_id=r.query_id, error=r.error) for r in results if r.error]
    reports = {}
    for k in ks:
        scores = []
        for r in results:
            if r.error:
                continue
            query = dataset.examples[r.query_id].query
            scores.append(QueryScore(
                query_id=r.query_id, start=query.start, length=query.length,
                reg_c=r.reg_c, **r.by_k[k],
            ))
        reports[k] = build_report(method.name, k, scores, failures, short_threshold)

    logger.info(
        f"LOQO [{method.name}] done in {time.perf_counter() - started:.1f}s: "
        f"{len(folds) - len(failures)} scored, {len(failures)} failed"
    )
    return reports


def evaluate_loqo_multi(
    dataset: Dataset,
    method: Method,
    ks: Sequence[int],
    c_grid: Sequence[float] = DEFAULT_C_GRID,
    mc: Optional[MonteCarloConfig] = None,
    seed: int = 0,
    threads: int = 4,
    reg_c: Optional[float] = None,
    short_threshold: int = 5,
) -> Dict[int, MetricReport]:
    """Synchronous wrapper around evaluate_loqo_async"""
    return asyncio.run(evaluate_loqo_async(
        dataset, method, ks, c_grid, mc, seed, threads, reg_c, short_threshold
    ))


def evaluate_loqo(
    dataset: Dataset,
    method: Method,
    k: int,
    c_grid: Sequence[float] = DEFAULT_C_GRID,
    mc: Optional[MonteCarloConfig] = None,
    seed: int = 0,
    threads: int = 4,
    reg_c: Optional[float] = None,
    short_threshold: int = 5,
) -> MetricReport:
    """Leave-one-query-out report for a single k"""
    return evaluate_loqo_multi(dataset, method, [k], c_grid, mc, seed, threads, reg_c, short_threshold)[k]


def report_rows(reports: Sequence[MetricReport]) -> List[Tuple[int, str, int, float, float, float]]:
    """(query_id, method, k, f1_points, f1_pairs, tau_b) rows in report order"""
    return [
        (s.query_id, r.method, r.k, s.f1_points, s.f1_pairs, s.tau_b)
        for r in reports
        for s in r.scores
    ]
