"""Habit extraction from (start, end) activity tuples.

Points are ``(start_hours, end_hours)`` pairs; labels use ``NOISE`` (-1) for
points DBSCAN left unclustered.
"""

from ._habitminer import (
    NOISE,
    HabitminerError,
    agglomerative,
    dbscan,
    elbow_eps,
    euclidean,
    extract_habits,
    generate,
    inertia,
    kmeans,
    mean_pairwise_distance,
    noise_metric,
    parse_event_log,
    parse_power_csv,
    profile,
    read_intervals_csv,
    silhouette_score,
    write_intervals_csv,
)

__all__ = [
    "NOISE",
    "HabitminerError",
    "agglomerative",
    "dbscan",
    "elbow_eps",
    "euclidean",
    "extract_habits",
    "generate",
    "inertia",
    "kmeans",
    "mean_pairwise_distance",
    "noise_metric",
    "parse_event_log",
    "parse_power_csv",
    "profile",
    "read_intervals_csv",
    "silhouette_score",
    "write_intervals_csv",
]
