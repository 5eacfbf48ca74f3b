"""Comparison of sweep results: best rows, per-group spreads, Welch tests, size split."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from scipy.special import stdtr

from .sweep import GROUPS, ResultRow

METRIC_COLUMNS = ("uniformComplexity", "cohesion", "coupling", "tsr", "combined")
HIGHER_IS_BETTER = {"cohesion"}

SMALL = "SMALL"
LARGE = "LARGE"


class StatsError(ValueError):
    """Invalid statistics input."""


def metric_value(row: ResultRow, metric: str) -> float:
    try:
        attr = {
            "uniformComplexity": "uniform_complexity",
            "cohesion": "cohesion",
            "coupling": "coupling",
            "tsr": "tsr",
            "combined": "combined",
        }[metric]
    except KeyError:
        raise StatsError(f"unknown metric: {metric!r}") from None
    return getattr(row.metrics, attr)


@dataclass(frozen=True)
class WelchResult:
    t_statistic: float
    degrees_of_freedom: float
    p_value: float  # one-sided, H1: mean(a) > mean(b)


def welch_test(sample_a, sample_b) -> WelchResult:
    """Welch's unequal-variance t-test, one-sided for mean(a) greater than mean(b)."""
    a = [float(x) for x in sample_a]
    b = [float(x) for x in sample_b]
    if len(a) < 2 or len(b) < 2:
        raise StatsError("each sample needs at least two values")
    mean_a, mean_b = sum(a) / len(a), sum(b) / len(b)
    var_a = sum((x - mean_a) ** 2 for x in a) / (len(a) - 1)
    var_b = sum((x - mean_b) ** 2 for x in b) / (len(b) - 1)
    if var_a == 0.0 and var_b == 0.0:
        raise StatsError("both samples have zero variance")
    part_a, part_b = var_a / len(a), var_b / len(b)
    t = (mean_a - mean_b) / math.sqrt(part_a + part_b)
    df = (part_a + part_b) ** 2 / (
        part_a**2 / (len(a) - 1) + part_b**2 / (len(b) - 1)
    )
    p = float(stdtr(df, -t))  # upper tail by symmetry of the t distribution
    return WelchResult(t, df, p)


def best_decompositions(rows: list[ResultRow], metric: str) -> list[ResultRow]:
    """The winning row per (codebase, cluster count); weight-vector order breaks ties."""
    if metric not in METRIC_COLUMNS:
        raise StatsError(f"unknown metric: {metric!r}")
    sign = -1.0 if metric in HIGHER_IS_BETTER else 1.0
    groups: dict[tuple[str, int], ResultRow] = {}
    for row in rows:
        key = (row.codebase, row.n_clusters)
        rank = (sign * metric_value(row, metric), row.weights.as_tuple())
        held = groups.get(key)
        if held is None or rank < (sign * metric_value(held, metric), held.weights.as_tuple()):
            groups[key] = row
    return [groups[key] for key in sorted(groups)]


def quantile(values, fraction: float) -> float:
    """Linear-interpolation quantile over the sorted sample."""
    if not values:
        raise StatsError("quantile of an empty sample")
    return float(np.quantile(np.asarray(values, dtype=float), fraction, method="linear"))


def group_summary(rows: list[ResultRow], metric: str) -> dict[str, dict]:
    """Count and quartiles of one metric per representation group.

    Groups without rows still appear, with a count of 0 and no spread fields.
    """
    if metric not in METRIC_COLUMNS:
        raise StatsError(f"unknown metric: {metric!r}")
    by_group: dict[str, list[float]] = defaultdict(list)
    for row in rows:
        by_group[row.group].append(metric_value(row, metric))
    out: dict[str, dict] = {}
    for group in sorted(set(GROUPS) | by_group.keys()):
        values = by_group.get(group)
        if not values:
            out[group] = {"count": 0}
            continue
        out[group] = {
            "count": len(values),
            "median": quantile(values, 0.5),
            "q1": quantile(values, 0.25),
            "q3": quantile(values, 0.75),
        }
    return out


def best_share_by_group(best_rows: list[ResultRow]) -> dict[str, float]:
    """Percentage of winning rows contributed by each representation group."""
    if not best_rows:
        raise StatsError("no best rows to share out")
    counts: dict[str, int] = defaultdict(int)
    for row in best_rows:
        counts[row.group] += 1
    return {
        group: 100.0 * count / len(best_rows) for group, count in sorted(counts.items())
    }


@dataclass(frozen=True)
class CodebaseStats:
    codebase: str
    commits: float  # logical commit count
    authors: float


@dataclass(frozen=True)
class SizeSplit:
    commit_threshold: float
    author_threshold: float
    labels: dict[str, dict[str, str]]  # codebase -> {"commits": ..., "authors": ...}


def size_split(stats: list[CodebaseStats], sample_std: bool = False) -> SizeSplit:
    """Label codebases LARGE whose count strictly exceeds mean + one standard deviation.

    Commits and authors are split independently.  The population standard
    deviation is used unless sample_std is set.
    """
    if len(stats) < 2:
        raise StatsError("size split needs at least two codebases")
    ddof = 1 if sample_std else 0
    commits = np.array([s.commits for s in stats], dtype=float)
    authors = np.array([s.authors for s in stats], dtype=float)
    commit_threshold = float(commits.mean() + commits.std(ddof=ddof))
    author_threshold = float(authors.mean() + authors.std(ddof=ddof))
    labels = {
        s.codebase: {
            "commits": LARGE if s.commits > commit_threshold else SMALL,
            "authors": LARGE if s.authors > author_threshold else SMALL,
        }
        for s in sorted(stats, key=lambda s: s.codebase)
    }
    return SizeSplit(commit_threshold, author_threshold, labels)
