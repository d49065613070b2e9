"""Dataset invariant checks. Violations are returned as data."""

from typing import List

from .schemas import Dataset, Violation


def validate_dataset(dataset: Dataset) -> List[Violation]:
    """
    Check every domain invariant of a dataset

    Args:
        dataset: Dataset to check

    Returns:
        List of violations, empty iff the dataset is well formed
    """
    violations: List[Violation] = []
    table = dataset.pois
    m = len(table)
    n_bins = table.n_bins

    # POI 表
    for position, poi in enumerate(table.pois):
        if poi.id != position:
            violations.append(Violation(rule="poi_id_dense", detail=f"POI at position {position} has id {poi.id}"))
        for name in ("pop_bin", "visit_bin", "duration_bin"):
            value = getattr(poi, name)
            if value >= n_bins:
                violations.append(Violation(rule="bin_range", detail=f"POI {poi.id} {name}={value} >= {n_bins}"))
        if poi.popularity > poi.n_visits:
            violations.append(Violation(
                rule="popularity_le_visits",
                detail=f"POI {poi.id} popularity {poi.popularity} > n_visits {poi.n_visits}",
            ))

    # 样本
    seen_queries = {}
    for index, example in enumerate(dataset.examples):
        query = example.query
        if query in seen_queries:
            violations.append(Violation(
                rule="query_unique", example=index,
                detail=f"query {query} already used by example {seen_queries[query]}",
            ))
        else:
            seen_queries[query] = index
        if query.start >= m:
            violations.append(Violation(rule="query_start_exists", example=index, detail=f"start {query.start} not in table"))
        if not example.trajectories:
            violations.append(Violation(rule="ground_truth_nonempty", example=index, detail="no trajectories"))
        stray = sorted({v.poi for v in example.visits if v.poi >= m})
        if stray:
            violations.append(Violation(rule="visit_poi_exists", example=index, detail=f"unknown POI ids {stray} in visits"))

        seen_trajectories = set()
        for trajectory in example.trajectories:
            if len(trajectory) == 0:
                violations.append(Violation(rule="trajectory_nonempty", example=index))
                continue
            unknown = [p for p in trajectory.pois if not 0 <= p < m]
            if unknown:
                violations.append(Violation(
                    rule="trajectory_poi_exists", example=index,
                    detail=f"unknown POI ids {unknown} in {list(trajectory.pois)}",
                ))
            if trajectory.start != query.start:
                violations.append(Violation(
                    rule="trajectory_start", example=index,
                    detail=f"{list(trajectory.pois)} does not start at {query.start}",
                ))
            if len(trajectory) != query.length:
                violations.append(Violation(
                    rule="trajectory_length", example=index,
                    detail=f"{list(trajectory.pois)} has length {len(trajectory)}, query length {query.length}",
                ))
            if trajectory.pois in seen_trajectories:
                violations.append(Violation(
                    rule="trajectory_duplicate", example=index,
                    detail=f"{list(trajectory.pois)} appears more than once",
                ))
            seen_trajectories.add(trajectory.pois)

    return violations
