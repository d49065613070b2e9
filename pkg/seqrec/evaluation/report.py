"""Report writers: per-query CSV and JSON summary"""

from pathlib import Path
from typing import Any, Dict, Sequence, Union

import pandas as pd

from ..services.archive import ArchiveManager, atomic_write_text
from .protocol import METRICS, MetricReport, report_rows

REPORT_COLUMNS = ["query_id", "method", "k", "f1_points", "f1_pairs", "tau_b"]


def report_frame(reports: Sequence[MetricReport]) -> pd.DataFrame:
    return pd.DataFrame(report_rows(reports), columns=REPORT_COLUMNS)


def write_report_csv(reports: Sequence[MetricReport], path: Union[str, Path]) -> Path:
    """One row per (method, k, query), in report order"""
    return atomic_write_text(path, report_frame(reports).to_csv(index=False, float_format="%.10g"))


def summary_dict(reports: Sequence[MetricReport]) -> Dict[str, Any]:
    """{method: {k: {aggregates, short, long, failures}}}"""
    summary: Dict[str, Any] = {}
    for report in reports:
        entry = {
            "n_queries": len(report.scores),
            "aggregates": {m: report.aggregates[m].model_dump() for m in METRICS if m in report.aggregates},
            "short": {m: s.model_dump() for m, s in report.short.items()},
            "long": {m: s.model_dump() for m, s in report.long.items()},
            "short_threshold": report.short_threshold,
            "failures": [f.model_dump() for f in report.failures],
        }
        summary.setdefault(report.method, {})[str(report.k)] = entry
    return summary


def write_report(reports: Sequence[MetricReport], archive: ArchiveManager,
                 csv_name: str = "report.csv", json_name: str = "summary.json") -> Dict[str, Path]:
    """Write both report files into an archive directory"""
    csv_path = write_report_csv(reports, archive.path(csv_name))
    json_path = archive.save_json(json_name, summary_dict(reports))
    return {"csv": csv_path, "json": json_path}
