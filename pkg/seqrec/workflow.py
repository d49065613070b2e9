"""Step orchestration behind each command"""

import time
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from loguru import logger

from .config.settings import Settings
from .evaluation.methods import DecodeOptions, make_method
from .evaluation.protocol import MetricReport, MonteCarloConfig, evaluate_loqo_multi, tune_c
from .evaluation.report import write_report
from .learn.predict import model_chain_scores
from .learn.rank_svm import train_poirank
from .learn.ssvm import TrainConfig, train_structured
from .models.errors import Infeasible, SeqRecError
from .models.schemas import Dataset, DatasetSummary, IngestConfig, Model, PoiTable, Query, Variant
from .models.validation import validate_dataset
from .pathopt.engine import top_k_paths
from .pathopt.held_karp import PathCut
from .pathopt.lp_export import export_ilp
from .preprocessing.corpus_loader import read_corpus, summarize_corpus
from .services.archive import ArchiveManager, load_dataset, load_model
from .services.manifest import RunManifest, write_manifest
from .utils.training_tracker import TrainingTracker

PathLike = Union[str, Path]


def _banner(title: str):
    logger.info("=" * 80)
    logger.info(title)
    logger.info("=" * 80)


def _snapshot(settings: Settings) -> Dict:
    return settings.model_dump(mode="json")


# ============ ingest ============

def run_ingest(
    traj_file: PathLike,
    poi_file: PathLike,
    out: PathLike,
    settings: Settings,
    seed: int = 0,
) -> Tuple[Dataset, DatasetSummary]:
    """
    CSV -> validated dataset archive plus corpus statistics

    Writes dataset.json, stats.json and manifest.json into ``out``.
    """
    started = time.perf_counter()
    archive = ArchiveManager(out)
    config = IngestConfig(n_clusters=settings.n_clusters, n_bins=settings.n_bins, rng_seed=seed)
    manifest = RunManifest(command="ingest", config={**_snapshot(settings), **config.model_dump()}, seed=seed)

    _banner("Step 1: Loading corpus")
    corpus = read_corpus(traj_file, poi_file, config)
    manifest.add_input(traj_file)
    manifest.add_input(poi_file)
    logger.info(f"✓ Step 1 complete - {corpus.n_records} visit records")

    _banner("Step 2: Validating dataset")
    violations = validate_dataset(corpus.dataset)
    if violations:
        for v in violations:
            logger.error(f"[{v.rule}] example={v.example} {v.detail}")
        raise SeqRecError(f"ingested dataset violates {len(violations)} invariants")
    logger.info("✓ Step 2 complete - no violations")

    _banner("Step 3: Writing archive")
    summary = summarize_corpus(corpus, settings.short_traj_threshold)
    manifest.add_output(archive.save_dataset(corpus.dataset), archive.root)
    manifest.add_output(archive.save_json("stats.json", summary.model_dump(mode="json")), archive.root)
    manifest.wall_seconds = round(time.perf_counter() - started, 3)
    write_manifest(manifest, archive)
    logger.info(f"✓ Step 3 complete - {summary.line()}")
    return corpus.dataset, summary


# ============ train ============

def run_train(
    dataset_path: PathLike,
    variant: Variant,
    out: PathLike,
    settings: Settings,
    reg_c: Optional[float] = None,
    tune: bool = False,
    seed: int = 0,
) -> Model:
    """
    Train one model on the whole archive

    Writes model.json, diagnostics.jsonl (structured variants) and manifest.json.
    """
    started = time.perf_counter()
    variant = Variant(variant)
    archive = ArchiveManager(out)
    dataset = load_dataset(dataset_path)
    manifest = RunManifest(command="train", config=_snapshot(settings), seed=seed)
    manifest.add_input(dataset_path)

    c = reg_c if reg_c is not None else settings.reg_c
    if tune:
        _banner("Step 1: Tuning C by Monte Carlo cross validation")
        method = make_method(
            variant.value, DecodeOptions(settings.ilp_threshold, settings.max_expansions, settings.exact_path_max_pois),
            max_epochs=settings.max_epochs, tol=settings.tol,
        )
        mc = MonteCarloConfig(train_frac=settings.mc_train_frac, repeats=settings.mc_repeats)
        c = tune_c(method, dataset.trainable(), settings.c_grid, mc, seed)
        logger.info(f"✓ Step 1 complete - C={c:g}")
    manifest.config.update({"variant": variant.value, "reg_c": c, "tune": tune})

    _banner(f"Step 2: Training {variant.value} (C={c:g})")
    tracker = None
    if variant is Variant.POIRANK:
        model = train_poirank(dataset, c)
    else:
        tracker = TrainingTracker(label=variant.value)
        config = TrainConfig(
            reg_c=c, variant=variant, max_epochs=settings.max_epochs, tol=settings.tol,
            seed=seed, max_expansions=settings.max_expansions,
        )
        model = train_structured(dataset, config, tracker)
        tracker.print_summary()
    logger.info("✓ Step 2 complete")

    manifest.add_output(archive.save_model(model), archive.root)
    if tracker is not None:
        manifest.add_output(tracker.save_jsonl(archive.path("diagnostics.jsonl")), archive.root)
    manifest.wall_seconds = round(time.perf_counter() - started, 3)
    write_manifest(manifest, archive)
    return model


# ============ evaluate ============

def run_evaluate(
    dataset_path: PathLike,
    methods: Sequence[str],
    ks: Sequence[int],
    out: PathLike,
    settings: Settings,
    seed: int = 0,
    reg_c: Optional[float] = None,
) -> List[MetricReport]:
    """
    LOQO evaluation of every method at every k

    Writes report.csv, summary.json and manifest.json.
    """
    started = time.perf_counter()
    archive = ArchiveManager(out)
    dataset = load_dataset(dataset_path)
    manifest = RunManifest(command="evaluate", config=_snapshot(settings), seed=seed)
    manifest.add_input(dataset_path)
    manifest.config.update({"methods": list(methods), "k": list(ks), "reg_c": reg_c})

    decode = DecodeOptions(settings.ilp_threshold, settings.max_expansions, settings.exact_path_max_pois)
    mc = MonteCarloConfig(train_frac=settings.mc_train_frac, repeats=settings.mc_repeats)
    reports: List[MetricReport] = []
    for step, name in enumerate(methods, start=1):
        _banner(f"Step {step}: Evaluating {name}")
        method = make_method(name, decode, max_epochs=settings.max_epochs, tol=settings.tol)
        by_k = evaluate_loqo_multi(
            dataset, method, ks, settings.c_grid, mc, seed,
            threads=settings.threads, reg_c=reg_c, short_threshold=settings.short_traj_threshold,
        )
        for k in sorted(by_k):
            report = by_k[k]
            reports.append(report)
            agg = report.aggregates
            logger.info(
                f"   {name} k={k}: f1_points={agg['f1_points'].mean} f1_pairs={agg['f1_pairs'].mean} "
                f"tau_b={agg['tau_b'].mean} (n={agg['tau_b'].n}, failed={len(report.failures)})"
            )
        logger.info(f"✓ Step {step} complete")

    paths = write_report(reports, archive)
    for path in paths.values():
        manifest.add_output(path, archive.root)
    manifest.wall_seconds = round(time.perf_counter() - started, 3)
    write_manifest(manifest, archive)
    return reports


# ============ export-ilp ============

def resolve_start(table: PoiTable, start: str) -> int:
    """Source id first, then dense id"""
    poi = table.lookup_source(str(start))
    if poi is not None:
        return poi.id
    try:
        dense = int(start)
    except ValueError:
        raise ValueError(f"unknown start POI {start!r}")
    if dense not in table:
        raise ValueError(f"unknown start POI {start!r}")
    return dense


def run_export_ilp(
    model_path: PathLike,
    dataset_path: PathLike,
    start: str,
    length: int,
    k: int,
    out: PathLike,
    settings: Settings,
) -> List[Path]:
    """
    One LP file per sequential round; round r carries cuts for the r-1 best paths

    The cut paths come from the in-process engines.

    Raises:
        Infeasible: length exceeds the POI count
    """
    started = time.perf_counter()
    archive = ArchiveManager(out)
    model = load_model(model_path)
    dataset = load_dataset(dataset_path)
    table = dataset.pois
    query = Query(start=resolve_start(table, start), length=length)
    manifest = RunManifest(command="export-ilp", config=_snapshot(settings))
    manifest.add_input(model_path)
    manifest.add_input(dataset_path)
    manifest.config.update({"query": str(query), "k": k})

    if query.length > table.m:
        raise Infeasible(f"no loop-free path of length {query.length} over {table.m} POIs")

    scores = model_chain_scores(model, query, table)
    paths: List[Tuple[int, ...]] = []
    rounds = 1
    if k > 1:
        # threshold 1: the exact engine whenever the table is small enough
        found = top_k_paths(scores, k, threshold=1, max_expansions=settings.max_expansions,
                            max_pois=settings.exact_path_max_pois)
        paths = [seq for seq, _ in found.items]
        # round r has a feasible point only while fewer than all paths are cut
        rounds = len(paths)
    written = []
    for r in range(1, rounds + 1):
        cuts = [PathCut(p) for p in paths[:r - 1]]
        target = archive.path(f"query_{query.start}_{query.length}_round{r}.lp")
        written.append(export_ilp(scores, cuts, target))
        manifest.add_output(target, archive.root)
        logger.info(f"   round {r}: {len(cuts)} cuts -> {target.name}")
    if rounds < k:
        logger.warning(f"Only {len(paths)} paths exist; wrote {rounds} rounds instead of {k}")

    manifest.wall_seconds = round(time.perf_counter() - started, 3)
    write_manifest(manifest, archive)
    logger.info(f"✓ Export complete - {len(written)} LP files")
    return written
