"""
Main Entry Point for seqrec
Command-line interface: ingest -> train -> evaluate -> export-ilp
"""

import argparse
import sys
import traceback
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv
from loguru import logger

from .config.settings import Settings, settings
from .evaluation.methods import METHOD_NAMES
from .models.errors import SeqRecError
from .models.schemas import Variant
from .utils.logger import setup_logger
from .workflow import run_evaluate, run_export_ilp, run_ingest, run_train

VARIANTS = {
    "sp": Variant.SP,
    "sr": Variant.SR,
    "sppath": Variant.SPPATH,
    "srpath": Variant.SRPATH,
    "poirank": Variant.POIRANK,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seqrec", description="Structured trajectory recommendation")
    parser.add_argument("--log-level", default=None, help="Overrides SEQREC_LOG_LEVEL")
    sub = parser.add_subparsers(dest="command", required=True)

    # 公共参数
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Root seed of every random draw")
    common.add_argument("--out", default=None, help="Run directory (default: SEQREC_OUTPUT_DIR)")
    common.add_argument("--threshold-ilp", type=int, default=None,
                        help="Queries at least this long use the exact path engine")

    ingest = sub.add_parser("ingest", parents=[common], help="CSV corpus -> dataset archive")
    ingest.add_argument("--traj", required=True, help="Trajectory CSV")
    ingest.add_argument("--pois", required=True, help="POI CSV")

    train = sub.add_parser("train", parents=[common], help="Train one model")
    train.add_argument("--dataset", required=True, help="Dataset archive (dataset.json)")
    train.add_argument("--variant", choices=sorted(VARIANTS), default="sr")
    group = train.add_mutually_exclusive_group()
    group.add_argument("--c", type=float, default=None, help="Regularisation constant C")
    group.add_argument("--tune", action="store_true", help="Pick C by Monte Carlo cross validation")

    evaluate = sub.add_parser("evaluate", parents=[common], help="Leave-one-query-out evaluation")
    evaluate.add_argument("--dataset", required=True)
    evaluate.add_argument("--methods", nargs="+", default=["random", "popularity"], choices=METHOD_NAMES)
    evaluate.add_argument("--k", nargs="+", type=int, default=None, help="Top-k sizes (default 1 3 5 10)")
    evaluate.add_argument("--c", type=float, default=None, help="Fixed C instead of per-fold tuning")

    export = sub.add_parser("export-ilp", parents=[common], help="Write the path ILP of one query")
    export.add_argument("--model", required=True, help="Model JSON")
    export.add_argument("--dataset", required=True, help="Dataset archive holding the POI table")
    export.add_argument("--start", required=True, help="Start POI (source id, else dense id)")
    export.add_argument("--length", type=int, required=True)
    export.add_argument("--k", type=int, default=1, help="Number of sequential rounds")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    解析命令行并执行对应步骤

    Returns:
        Process exit code
    """
    # 加载环境变量
    load_dotenv()
    args = build_parser().parse_args(argv)

    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.threshold_ilp is not None:
        overrides["ilp_threshold"] = args.threshold_ilp
    if args.log_level is not None:
        overrides["log_level"] = args.log_level
    run_settings = Settings.model_validate({**settings.model_dump(), **overrides}) if overrides else settings
    out = Path(args.out or run_settings.output_dir)
    setup_logger(run_settings.log_level, log_file=out / "run.log")
    seed = run_settings.seed

    if args.command == "ingest":
        _, summary = run_ingest(args.traj, args.pois, out, run_settings, seed=seed)
        print(summary.line())
        print(f"short={summary.n_short} long={summary.n_long} "
              f"trainable_queries={summary.n_trainable_queries} gt_buckets={summary.gt_buckets}")
    elif args.command == "train":
        model = run_train(args.dataset, VARIANTS[args.variant], out, run_settings,
                          reg_c=args.c, tune=args.tune, seed=seed)
        print(f"variant={model.variant.value} C={model.reg_c:g} -> {out / 'model.json'}")
    elif args.command == "evaluate":
        ks = args.k or run_settings.top_k_values
        reports = run_evaluate(args.dataset, args.methods, ks, out, run_settings, seed=seed, reg_c=args.c)
        for report in reports:
            agg = report.aggregates
            print(f"{report.method} k={report.k} " + " ".join(
                f"{name}={s.mean:.4f}±{s.sem:.4f}" if s.mean is not None else f"{name}=n/a"
                for name, s in agg.items()
            ))
    elif args.command == "export-ilp":
        written = run_export_ilp(args.model, args.dataset, args.start, args.length, args.k, out, run_settings)
        for path in written:
            print(path)
    return 0


def cli(argv: Optional[List[str]] = None):
    """Run main and map errors to exit codes: 2 parse, 3 train, 4 infeasible, 1 other"""
    try:
        code = main(argv)
    except KeyboardInterrupt:
        print("\n⚠️ 用户中断", file=sys.stderr)
        sys.exit(130)
    except SeqRecError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        sys.exit(e.exit_code)
    except Exception as e:
        print(f"\n❌ Error: {e}", file=sys.stderr)
        traceback.print_exc()
        sys.exit(1)
    sys.exit(code)


if __name__ == "__main__":
    cli()
