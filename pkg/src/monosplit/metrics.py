"""Decomposition quality: functionality splitting cost, cohesion, coupling, team size ratio."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .accesses import READ, AccessModel
from .clustering import Decomposition
from .history import DevelopmentHistory


class MetricsError(ValueError):
    """Invalid metric input."""


def _assignment(decomposition: Decomposition) -> dict[str, int]:
    if decomposition.n_clusters == 0:
        raise MetricsError("decomposition has no clusters")
    return decomposition.assignment()


def _cluster_of(assignment: dict[str, int], entity: str) -> int:
    try:
        return assignment[entity]
    except KeyError:
        raise MetricsError(f"trace entity missing from decomposition: {entity!r}") from None


def _covered_assignment(decomposition: Decomposition, model: AccessModel) -> dict[str, int]:
    """Assignment map, verified to cover every entity the model mentions."""
    assignment = _assignment(decomposition)
    for entity in model.entities:
        _cluster_of(assignment, entity)
    return assignment


def complexity(decomposition: Decomposition, model: AccessModel) -> float:
    """Mean rework cost of functionalities split across clusters.

    A functionality is distributed when its trace touches more than one cluster.
    Each of its distinct (entity, mode) accesses costs one per other distributed
    functionality touching that entity in the opposite mode.
    """
    assignment = _covered_assignment(decomposition, model)
    functionalities = model.functionalities
    if not functionalities:
        return 0.0
    distributed = {
        f.name
        for f in functionalities
        if len({_cluster_of(assignment, e) for e in f.entities()}) >= 2
    }
    readers: dict[str, set[str]] = defaultdict(set)
    writers: dict[str, set[str]] = defaultdict(set)
    for funct in functionalities:
        if funct.name not in distributed:
            continue
        for entity, mode in funct.access_pairs():
            (readers if mode == READ else writers)[entity].add(funct.name)
    total = 0
    for funct in functionalities:
        if funct.name not in distributed:
            continue
        for entity, mode in funct.access_pairs():
            opposite = writers[entity] if mode == READ else readers[entity]
            total += len(opposite - {funct.name})
    return total / len(functionalities)


def max_complexity(model: AccessModel) -> float:
    """Splitting cost of the all-singletons decomposition, ignoring access modes.

    Here a functionality is distributed as soon as it touches two entities, and
    every distinct (entity, mode) access costs one per other distributed
    functionality touching that entity in any mode.
    """
    functionalities = model.functionalities
    if not functionalities:
        return 0.0
    distributed = {f.name for f in functionalities if len(f.entities()) >= 2}
    touchers: dict[str, set[str]] = defaultdict(set)
    for funct in functionalities:
        if funct.name in distributed:
            for entity in funct.entities():
                touchers[entity].add(funct.name)
    total = 0
    for funct in functionalities:
        if funct.name not in distributed:
            continue
        for entity, _mode in funct.access_pairs():
            total += len(touchers[entity] - {funct.name})
    return total / len(functionalities)


def uniform_complexity(decomposition: Decomposition, model: AccessModel) -> float:
    """Splitting cost normalized by the all-singletons worst case (0 when both are 0)."""
    _covered_assignment(decomposition, model)
    ceiling = max_complexity(model)
    if ceiling == 0:
        return 0.0
    return complexity(decomposition, model) / ceiling


def cohesion(decomposition: Decomposition, model: AccessModel) -> float:
    """Mean share of a cluster its visiting functionalities actually touch."""
    _covered_assignment(decomposition, model)
    total = 0.0
    for cluster in decomposition.clusters:
        members = frozenset(cluster)
        shares = [
            len(funct.entities() & members) / len(cluster)
            for funct in model.functionalities
            if funct.entities() & members
        ]
        total += sum(shares) / len(shares) if shares else 1.0
    return total / decomposition.n_clusters


def coupling(decomposition: Decomposition, model: AccessModel) -> float:
    """Mean share of a cluster's entities exposed to each other cluster.

    An entity is exposed to a cluster when some trace accesses it directly after
    an entity of that cluster.
    """
    assignment = _covered_assignment(decomposition, model)
    n = decomposition.n_clusters
    if n == 1:
        return 0.0
    exposed: dict[tuple[int, int], set[str]] = defaultdict(set)
    for funct in model.functionalities:
        trace = funct.trace
        for first, second in zip(trace, trace[1:]):
            cluster_a = _cluster_of(assignment, first.entity)
            cluster_b = _cluster_of(assignment, second.entity)
            if cluster_a != cluster_b:
                exposed[(cluster_a, cluster_b)].add(second.entity)
    total = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                total += len(exposed.get((i, j), ())) / len(decomposition.clusters[j])
    return total / (n * (n - 1))


def tsr(
    decomposition: Decomposition,
    history: DevelopmentHistory,
    entity_files: dict[str, str | None],
) -> float:
    """Team size ratio: mean cluster author count over the total author count."""
    total_authors = history.all_authors()
    if not total_authors:
        raise MetricsError("history has no authors")
    if decomposition.n_clusters == 0:
        raise MetricsError("decomposition has no clusters")
    author_count_sum = 0
    for cluster in decomposition.clusters:
        authors: set[str] = set()
        for entity in cluster:
            filename = entity_files.get(entity)
            if filename is not None and history.has_file(filename):
                authors |= history.authors(filename)
        author_count_sum += len(authors)
    return (author_count_sum / decomposition.n_clusters) / len(total_authors)


def combined_score(
    uniform_complexity_value: float,
    cohesion_value: float,
    coupling_value: float,
    tsr_value: float,
) -> float:
    """Single score to minimize; shifts the improving direction of cohesion."""
    for name, value in (
        ("uniform complexity", uniform_complexity_value),
        ("cohesion", cohesion_value),
        ("coupling", coupling_value),
        ("tsr", tsr_value),
    ):
        if not 0.0 <= value <= 1.0:
            raise MetricsError(f"{name} out of range: {value!r}")
    return (uniform_complexity_value + coupling_value + tsr_value - cohesion_value + 1.0) / 4.0


@dataclass(frozen=True)
class MetricsRecord:
    uniform_complexity: float
    cohesion: float
    coupling: float
    tsr: float
    combined: float


def evaluate(
    decomposition: Decomposition,
    model: AccessModel,
    history: DevelopmentHistory,
    entity_files: dict[str, str | None],
) -> MetricsRecord:
    """All five quality numbers of one decomposition."""
    uniform = uniform_complexity(decomposition, model)
    cohesion_value = cohesion(decomposition, model)
    coupling_value = coupling(decomposition, model)
    tsr_value = tsr(decomposition, history, entity_files)
    return MetricsRecord(
        uniform,
        cohesion_value,
        coupling_value,
        tsr_value,
        combined_score(uniform, cohesion_value, coupling_value, tsr_value),
    )
