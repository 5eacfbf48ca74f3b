"""Functionality access traces: which domain entities each functionality reads and writes."""

from __future__ import annotations

import json
from dataclasses import dataclass

READ = "R"
WRITE = "W"
ANY = "ANY"  # union of read and write

_MODES = (READ, WRITE)


class AccessModelError(ValueError):
    """Malformed access description."""


@dataclass(frozen=True)
class Access:
    entity: str
    mode: str  # READ or WRITE


@dataclass(frozen=True)
class Functionality:
    name: str
    trace: tuple[Access, ...]  # ordered, consecutive duplicates preserved

    def entities(self) -> frozenset[str]:
        return frozenset(a.entity for a in self.trace)

    def access_pairs(self) -> frozenset[tuple[str, str]]:
        """Distinct (entity, mode) pairs touched by this functionality."""
        return frozenset((a.entity, a.mode) for a in self.trace)


class AccessModel:
    """All functionalities of one monolith plus lookup indexes.

    The entity set is derived: exactly the names appearing in traces.
    """

    def __init__(self, functionalities: list[Functionality]):
        self.functionalities: tuple[Functionality, ...] = tuple(functionalities)
        names = [f.name for f in self.functionalities]
        if len(set(names)) != len(names):
            raise AccessModelError("duplicate functionality name")
        self.entities: tuple[str, ...] = tuple(
            sorted({a.entity for f in self.functionalities for a in f.trace})
        )
        # entity -> mode -> set of functionality names
        index: dict[str, dict[str, set[str]]] = {
            e: {READ: set(), WRITE: set(), ANY: set()} for e in self.entities
        }
        for f in self.functionalities:
            for a in f.trace:
                index[a.entity][a.mode].add(f.name)
                index[a.entity][ANY].add(f.name)
        self._by_entity = index

    def functionalities_accessing(self, entity: str, mode: str = ANY) -> frozenset[str]:
        """Names of functionalities that access `entity` in `mode` (ANY = read or write)."""
        if mode not in (READ, WRITE, ANY):
            raise AccessModelError(f"unknown access mode: {mode!r}")
        try:
            return frozenset(self._by_entity[entity][mode])
        except KeyError:
            raise AccessModelError(f"unknown entity: {entity!r}") from None

    def to_json_dict(self) -> dict:
        return {
            f.name: [[a.entity, a.mode] for a in f.trace]
            for f in sorted(self.functionalities, key=lambda f: f.name)
        }

    def serialize(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"


def _reject_duplicate_keys(pairs):
    seen = set()
    for key, _ in pairs:
        if key in seen:
            raise AccessModelError(f"duplicate functionality key: {key!r}")
        seen.add(key)
    return dict(pairs)


def load_access_model(text: str) -> AccessModel:
    """Parse the accesses JSON mapping functionality name -> [[entity, mode], ...]."""
    try:
        raw = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise AccessModelError(f"invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise AccessModelError("top level must be an object of functionalities")
    functionalities = []
    for name, trace in raw.items():
        if not isinstance(name, str) or not name:
            raise AccessModelError("empty functionality name")
        if not isinstance(trace, list):
            raise AccessModelError(f"trace of {name!r} must be a list")
        accesses = []
        for step in trace:
            if not isinstance(step, list) or len(step) != 2:
                raise AccessModelError(f"access in {name!r} must be an [entity, mode] pair")
            entity, mode = step
            if not isinstance(entity, str) or not entity:
                raise AccessModelError(f"bad entity name in {name!r}: {entity!r}")
            if mode not in _MODES:
                raise AccessModelError(f"bad access mode in {name!r}: {mode!r}")
            accesses.append(Access(entity, mode))
        functionalities.append(Functionality(name, tuple(accesses)))
    return AccessModel(functionalities)
