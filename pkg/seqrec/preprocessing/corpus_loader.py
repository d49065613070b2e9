"""
Corpus loading: POI and trajectory CSVs into a grouped Dataset

traj_file: user_id,traj_id,seq_index,poi_id[,arrival_ts,departure_ts]
poi_file:  poi_id,category,lon,lat
"""

import re
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from loguru import logger

from ..models.errors import ParseError, UnknownPoi
from ..models.schemas import Dataset, DatasetSummary, GroundTruthSet, IngestConfig, Query, Trajectory, Visit
from .poi_stats import derive_stats

TRAJ_COLUMNS = ["user_id", "traj_id", "seq_index", "poi_id"]
TIMESTAMP_COLUMNS = ["arrival_ts", "departure_ts"]
POI_COLUMNS = ["poi_id", "category", "lon", "lat"]

# header is line 1, first data row is line 2
_FIRST_DATA_LINE = 2
_LINE_RE = re.compile(r"line (\d+)")


@dataclass(frozen=True)
class Corpus:
    """Loaded dataset plus raw corpus counts that grouping does not keep"""
    dataset: Dataset
    n_records: int
    n_raw_trajectories: int
    n_duplicates: int
    raw_lengths: Tuple[int, ...]


# ============ CSV 读取 ============

def _read_csv(path: Union[str, Path], required: List[str]) -> pd.DataFrame:
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        return pd.DataFrame({column: pd.Series(dtype=str) for column in required})
    except pd.errors.ParserError as e:
        match = _LINE_RE.search(str(e))
        raise ParseError(str(e).strip(), line=int(match.group(1)) if match else None, path=str(path)) from e

    frame.columns = [c.strip() for c in frame.columns]
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise ParseError(f"missing columns {missing}", line=1, path=str(path))
    return frame


def _parse_int(frame: pd.DataFrame, column: str, path: Union[str, Path], minimum=None) -> np.ndarray:
    numeric = pd.to_numeric(frame[column].str.strip(), errors="coerce")
    bad = numeric.isna() | (numeric != np.floor(numeric))
    if minimum is not None:
        bad |= numeric < minimum
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raise ParseError(f"invalid {column} {frame[column].iloc[row]!r}", line=row + _FIRST_DATA_LINE, path=str(path))
    return numeric.to_numpy(dtype=np.int64)


def _parse_float(frame: pd.DataFrame, column: str, path: Union[str, Path]) -> np.ndarray:
    numeric = pd.to_numeric(frame[column].str.strip(), errors="coerce")
    bad = numeric.isna() | ~np.isfinite(numeric)
    if bad.any():
        row = int(np.flatnonzero(bad.to_numpy())[0])
        raise ParseError(f"invalid {column} {frame[column].iloc[row]!r}", line=row + _FIRST_DATA_LINE, path=str(path))
    return numeric.to_numpy(dtype=np.float64)


def read_poi_file(path: Union[str, Path]) -> pd.DataFrame:
    """
    Read and check the POI file

    Returns:
        Frame with columns poi_id (int), category, lon, lat, sorted by poi_id;
        row position is the dense POI id
    """
    frame = _read_csv(path, POI_COLUMNS)
    poi_id = _parse_int(frame, "poi_id", path)
    lon = _parse_float(frame, "lon", path)
    lat = _parse_float(frame, "lat", path)

    duplicated = pd.Series(poi_id).duplicated().to_numpy()
    if duplicated.any():
        row = int(np.flatnonzero(duplicated)[0])
        raise ParseError(f"duplicate poi_id {poi_id[row]}", line=row + _FIRST_DATA_LINE, path=str(path))

    pois = pd.DataFrame({
        "poi_id": poi_id,
        "category": frame["category"].str.strip().to_numpy(),
        "lon": lon,
        "lat": lat,
    })
    return pois.sort_values("poi_id", kind="mergesort").reset_index(drop=True)


def read_visit_file(path: Union[str, Path], poi_index: Dict[int, int]) -> pd.DataFrame:
    """
    Read and check the trajectory file

    Args:
        path: Trajectory CSV
        poi_index: Source poi_id -> dense id

    Returns:
        Frame with user_id, traj_id, seq_index, poi (dense id), line and, when
        both timestamp columns are present, duration
    """
    frame = _read_csv(path, TRAJ_COLUMNS)
    seq_index = _parse_int(frame, "seq_index", path, minimum=0)
    poi_id = _parse_int(frame, "poi_id", path)

    visits = pd.DataFrame({
        "user_id": frame["user_id"].str.strip().to_numpy(),
        "traj_id": frame["traj_id"].str.strip().to_numpy(),
        "seq_index": seq_index,
        "line": np.arange(len(frame), dtype=np.int64) + _FIRST_DATA_LINE,
    })

    dense = np.empty(len(frame), dtype=np.int64)
    for row, source in enumerate(poi_id):
        if int(source) not in poi_index:
            raise UnknownPoi(int(source), line=row + _FIRST_DATA_LINE)
        dense[row] = poi_index[int(source)]
    visits["poi"] = dense

    if all(c in frame.columns for c in TIMESTAMP_COLUMNS):
        arrival = _parse_float(frame, "arrival_ts", path)
        departure = _parse_float(frame, "departure_ts", path)
        duration = departure - arrival
        if (duration < 0).any():
            row = int(np.flatnonzero(duration < 0)[0])
            raise ParseError("departure_ts before arrival_ts", line=row + _FIRST_DATA_LINE, path=str(path))
        visits["duration"] = duration

    duplicated = visits.duplicated(["traj_id", "seq_index"]).to_numpy()
    if duplicated.any():
        row = int(np.flatnonzero(duplicated)[0])
        raise ParseError(
            f"duplicate (traj_id, seq_index) = ({visits['traj_id'].iloc[row]}, {seq_index[row]})",
            line=row + _FIRST_DATA_LINE, path=str(path),
        )
    return visits


# ============ 分组 ============

def extract_trajectories(visits: pd.DataFrame, path: Union[str, Path] = "") -> List[Tuple[int, ...]]:
    """Ordered POI sequences, one per traj_id, in order of first appearance"""
    return [seq for seq, _ in extract_trajectory_visits(visits, path)]


def extract_trajectory_visits(
    visits: pd.DataFrame,
    path: Union[str, Path] = "",
) -> List[Tuple[Tuple[int, ...], List[Visit]]]:
    """(POI sequence, visit records) per traj_id, in order of first appearance"""
    has_duration = "duration" in visits.columns
    out = []
    for traj_id, group in visits.groupby("traj_id", sort=False):
        group = group.sort_values("seq_index", kind="mergesort")
        expected = np.arange(len(group))
        if not np.array_equal(group["seq_index"].to_numpy(), expected):
            raise ParseError(
                f"seq_index of trajectory {traj_id!r} is not contiguous from 0",
                line=int(group["line"].min()), path=str(path) or None,
            )
        seq = tuple(int(p) for p in group["poi"])
        durations = group["duration"].to_numpy() if has_duration else [None] * len(group)
        records = [
            Visit(user_id=str(user), poi=int(poi), duration=None if d is None else float(d))
            for user, poi, d in zip(group["user_id"], group["poi"], durations)
        ]
        out.append((seq, records))
    return out


def group_trajectories(
    trajectories: List[Tuple[int, ...]],
    visits: Optional[List[List[Visit]]] = None,
) -> Tuple[List[GroundTruthSet], int]:
    """
    Group trajectories into ground-truth sets keyed by (first POI, length)

    Args:
        trajectories: POI sequences
        visits: Visit records aligned with ``trajectories``; a duplicate
            trajectory still contributes its visits

    Returns:
        (examples sorted by (start, length), number of duplicate trajectories dropped)
    """
    buckets: Dict[Tuple[int, int], set] = defaultdict(set)
    bucket_visits: Dict[Tuple[int, int], List[Visit]] = defaultdict(list)
    n_duplicates = 0
    for i, seq in enumerate(trajectories):
        key = (seq[0], len(seq))
        if seq in buckets[key]:
            n_duplicates += 1
        buckets[key].add(seq)
        if visits is not None:
            bucket_visits[key].extend(visits[i])

    examples = [
        GroundTruthSet(
            query=Query(start=start, length=length),
            trajectories=[Trajectory(pois=seq) for seq in sorted(seqs)],
            visits=bucket_visits.get((start, length), []),
        )
        for (start, length), seqs in sorted(buckets.items())
    ]
    return examples, n_duplicates


def read_corpus(traj_file: Union[str, Path], poi_file: Union[str, Path], config: IngestConfig) -> Corpus:
    """
    Load both CSVs, derive POI statistics and group trajectories into queries

    Args:
        traj_file: Trajectory CSV path
        poi_file: POI CSV path
        config: Ingest options

    Returns:
        Corpus with the Dataset and raw counts
    """
    pois = read_poi_file(poi_file)
    poi_index = {int(source): i for i, source in enumerate(pois["poi_id"])}
    visits = read_visit_file(traj_file, poi_index)

    table = derive_stats(pois, visits, config)
    extracted = extract_trajectory_visits(visits, traj_file)
    trajectories = [seq for seq, _ in extracted]
    examples, n_duplicates = group_trajectories(trajectories, [records for _, records in extracted])
    if n_duplicates:
        logger.info(f"Dropped {n_duplicates} duplicate trajectories while grouping")

    dataset = Dataset(pois=table, examples=examples)
    logger.info(
        f"Loaded {len(trajectories)} trajectories over {len(table)} POIs into {dataset.n_queries} queries"
    )
    return Corpus(
        dataset=dataset,
        n_records=len(visits),
        n_raw_trajectories=len(trajectories),
        n_duplicates=n_duplicates,
        raw_lengths=tuple(len(t) for t in trajectories),
    )


def load_corpus(traj_file: Union[str, Path], poi_file: Union[str, Path], config: IngestConfig) -> Dataset:
    """Load a corpus and return only its Dataset"""
    return read_corpus(traj_file, poi_file, config).dataset


def summarize_corpus(corpus: Corpus, short_threshold: int = 5) -> DatasetSummary:
    """Corpus statistics with the short/long trajectory split"""
    dataset = corpus.dataset
    buckets: Dict[str, int] = defaultdict(int)
    for example in dataset.examples:
        buckets[str(example.n)] += 1
    n_short = sum(1 for length in corpus.raw_lengths if length < short_threshold)
    return DatasetSummary(
        n_trajectories=corpus.n_raw_trajectories,
        n_pois=len(dataset.pois),
        n_queries=dataset.n_queries,
        n_trainable_queries=sum(1 for ex in dataset.examples if ex.query.length >= 2),
        gt_buckets=dict(sorted(buckets.items(), key=lambda kv: int(kv[0]))),
        n_short=n_short,
        n_long=corpus.n_raw_trajectories - n_short,
    )
