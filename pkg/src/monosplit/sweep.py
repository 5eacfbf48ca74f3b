"""Exhaustive sweep of weight vectors and cluster counts, scored and exported as CSV."""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .accesses import AccessModel
from .clustering import Decomposition, agglomerate, cut
from .history import DevelopmentHistory
from .metrics import MetricsRecord, evaluate
from .similarity import MEASURE_NAMES, Weights, measure_matrices

logger = logging.getLogger(__name__)

FILES_ONLY = "FILES_ONLY"
AUTHORSHIP_ONLY = "AUTHORSHIP_ONLY"
SEQUENCES_ONLY = "SEQUENCES_ONLY"
HISTORY = "HISTORY"
COMBINED = "COMBINED"
GROUPS = (FILES_ONLY, AUTHORSHIP_ONLY, SEQUENCES_ONLY, HISTORY, COMBINED)

CSV_COLUMNS = (
    "codebase",
    "nClusters",
    "wAccess",
    "wRead",
    "wWrite",
    "wSequence",
    "wCommit",
    "wAuthor",
    "group",
    "uniformComplexity",
    "cohesion",
    "coupling",
    "tsr",
    "combined",
)


class SweepError(ValueError):
    """Invalid sweep input."""


def enumerate_weights(step: int = 10) -> list[Weights]:
    """All weight vectors on the step grid summing to 100, in ascending lexicographic order."""
    if step <= 0 or 100 % step != 0:
        raise SweepError(f"step must be a positive divisor of 100, got {step}")
    out = []
    grid = range(0, 101, step)
    for access in grid:
        for read in grid:
            if access + read > 100:
                break
            for write in grid:
                if access + read + write > 100:
                    break
                for sequence in grid:
                    if access + read + write + sequence > 100:
                        break
                    for commit in grid:
                        rest = 100 - access - read - write - sequence - commit
                        if rest < 0:
                            break
                        out.append(Weights(access, read, write, sequence, commit, rest))
    return out


def classify_group(weights: Weights) -> str:
    """Which representation family a weight vector draws on."""
    sequence_side = weights.access + weights.read + weights.write + weights.sequence
    if sequence_side == 0:
        if weights.author == 0:
            return FILES_ONLY
        if weights.commit == 0:
            return AUTHORSHIP_ONLY
        return HISTORY
    if weights.commit + weights.author == 0:
        return SEQUENCES_ONLY
    return COMBINED


def cluster_counts(n_entities: int) -> list[int]:
    """Cluster counts to evaluate, wider for larger entity sets."""
    if n_entities < 3:
        raise SweepError(f"too few entities to decompose: {n_entities}")
    if n_entities <= 9:
        return [3]
    if n_entities <= 19:
        return [3, 4, 5]
    return list(range(3, 11))


@dataclass(frozen=True)
class ResultRow:
    codebase: str
    n_clusters: int
    weights: Weights
    group: str
    metrics: MetricsRecord


@dataclass(frozen=True)
class SweepFailure:
    codebase: str
    n_clusters: int
    weights: Weights
    error: str


def _score_grid(
    stack: np.ndarray,
    model: AccessModel,
    history: DevelopmentHistory,
    entity_files: dict[str, str | None],
    codebase: str,
    weight_vectors: list[Weights],
    counts: list[int],
) -> tuple[list[ResultRow], list[SweepFailure]]:
    entities = model.entities
    rows: list[ResultRow] = []
    failures: list[SweepFailure] = []
    cache: dict[tuple, MetricsRecord] = {}
    for weights in weight_vectors:
        group = classify_group(weights)
        try:
            values = np.tensordot(np.array(weights.as_tuple(), dtype=float), stack, axes=1)
            values /= 100.0
            np.fill_diagonal(values, 1.0)
            dissimilarity = 1.0 - (values + values.T) / 2.0
            np.fill_diagonal(dissimilarity, 0.0)
            dendrogram = agglomerate(dissimilarity)
        except Exception as exc:
            failures.extend(
                SweepFailure(codebase, n, weights, str(exc)) for n in counts
            )
            continue
        for n in counts:
            try:
                clusters = cut(dendrogram, n, entities)
                record = cache.get(clusters)
                if record is None:
                    decomposition = Decomposition(codebase, clusters, weights)
                    record = evaluate(decomposition, model, history, entity_files)
                    cache[clusters] = record
                rows.append(ResultRow(codebase, n, weights, group, record))
            except Exception as exc:
                failures.append(SweepFailure(codebase, n, weights, str(exc)))
    return rows, failures


def _score_grid_star(args):
    return _score_grid(*args)


def run_sweep(
    model: AccessModel,
    history: DevelopmentHistory,
    entity_files: dict[str, str | None],
    codebase: str,
    step: int = 10,
    parallelism: int = 1,
) -> tuple[list[ResultRow], list[SweepFailure]]:
    """Score every weight vector at every cluster count for one codebase.

    Failures of single rows are reported, not raised; the returned rows are
    sorted by (weight vector, cluster count) so output is reproducible no matter
    the parallelism degree.
    """
    if parallelism < 1:
        raise SweepError(f"parallelism must be at least 1, got {parallelism}")
    counts = cluster_counts(len(model.entities))
    weight_vectors = enumerate_weights(step)
    matrices = measure_matrices(model, history, entity_files, include_history=True)
    stack = np.stack([matrices[name] for name in MEASURE_NAMES])
    if parallelism == 1:
        rows, failures = _score_grid(
            stack, model, history, entity_files, codebase, weight_vectors, counts
        )
    else:
        chunk_size = -(-len(weight_vectors) // parallelism)
        chunks = [
            weight_vectors[i : i + chunk_size]
            for i in range(0, len(weight_vectors), chunk_size)
        ]
        rows, failures = [], []
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            for part_rows, part_failures in pool.map(
                _score_grid_star,
                [
                    (stack, model, history, entity_files, codebase, chunk, counts)
                    for chunk in chunks
                ],
            ):
                rows.extend(part_rows)
                failures.extend(part_failures)
    rows.sort(key=lambda r: (r.weights.as_tuple(), r.n_clusters))
    failures.sort(key=lambda f: (f.weights.as_tuple(), f.n_clusters))
    for failure in failures:
        logger.warning(
            "dropped %s n=%d weights=%s: %s",
            failure.codebase,
            failure.n_clusters,
            failure.weights.as_tuple(),
            failure.error,
        )
    return rows, failures


def _row_to_record(row: ResultRow) -> list:
    m = row.metrics
    return [
        row.codebase,
        row.n_clusters,
        *row.weights.as_tuple(),
        row.group,
        f"{m.uniform_complexity:.6f}",
        f"{m.cohesion:.6f}",
        f"{m.coupling:.6f}",
        f"{m.tsr:.6f}",
        f"{m.combined:.6f}",
    ]


def write_results_csv(rows: list[ResultRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(_row_to_record(row))
    return buffer.getvalue()


def read_results_csv(text: str) -> list[ResultRow]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SweepError("empty results CSV") from None
    if header != list(CSV_COLUMNS):
        raise SweepError(f"unexpected results CSV header: {header}")
    rows = []
    for record in reader:
        if not record:
            continue
        if len(record) != len(CSV_COLUMNS):
            raise SweepError(f"bad results CSV row: {record}")
        try:
            weights = Weights(*[int(v) for v in record[2:8]])
            metrics = MetricsRecord(*[float(v) for v in record[9:14]])
            row = ResultRow(record[0], int(record[1]), weights, record[8], metrics)
        except ValueError as exc:
            raise SweepError(f"bad results CSV row {record}: {exc}") from exc
        if row.group not in GROUPS:
            raise SweepError(f"unknown group in results CSV: {row.group!r}")
        rows.append(row)
    return rows
