"""Rough-set machinery over discretized decision tables.

Samples are indiscernible under an attribute set when they agree on every
attribute in it. The positive region is the union of indiscernibility
blocks whose members all share one label, and significance is the
fraction of samples inside the positive region. The greedy reduct adds
the attribute with the best significance gain each round and then prunes
attributes whose removal leaves significance unchanged.

Partitioning groups rows through a hashed key index, so the work grows as
attributes x samples with cheap lookups rather than pairwise comparison.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError
from .featurize import DecisionTable


@dataclass(frozen=True)
class Partition:
    """Indiscernibility classes, each a tuple of row indices, ordered by first member."""

    attrs: tuple[str, ...]
    blocks: tuple[tuple[int, ...], ...]
    n_samples: int


@dataclass(frozen=True)
class Approximation:
    lower: frozenset[int]
    upper: frozenset[int]


@dataclass(frozen=True)
class ReductStep:
    call: str
    significance: float


@dataclass(frozen=True)
class Reduct:
    steps: tuple[ReductStep, ...]
    removed_in_backward_pass: tuple[str, ...]
    final_significance: float

    @property
    def calls(self) -> tuple[str, ...]:
        """Surviving attributes, in addition order."""
        removed = set(self.removed_in_backward_pass)
        return tuple(s.call for s in self.steps if s.call not in removed)

    def to_json_dict(self) -> dict:
        return {
            "steps": [
                {"call": s.call, "significance": s.significance} for s in self.steps
            ],
            "final_significance": self.final_significance,
            "removed_in_backward_pass": list(self.removed_in_backward_pass),
        }


def _column_indices(table: DecisionTable, attrs: Iterable[str]) -> list[int]:
    lookup = {name: j for j, name in enumerate(table.calls)}
    cols = []
    for name in attrs:
        if name not in lookup:
            raise ConfigError(f"unknown attribute: {name!r}")
        cols.append(lookup[name])
    return cols


def partition(table: DecisionTable, attrs: Iterable[str]) -> Partition:
    """Group rows by their value tuple over attrs; no attrs means one block."""
    names = tuple(sorted(set(attrs)))
    cols = _column_indices(table, names)
    groups: dict[tuple[int, ...], list[int]] = {}
    for i in range(table.n_samples):
        key = tuple(int(table.bins[i, j]) for j in cols)
        groups.setdefault(key, []).append(i)
    blocks = sorted(groups.values(), key=lambda block: block[0])
    return Partition(
        attrs=names,
        blocks=tuple(tuple(b) for b in blocks),
        n_samples=table.n_samples,
    )


def approximate(part: Partition, target: Iterable[int]) -> Approximation:
    """Lower/upper approximation of a sample set under a partition."""
    wanted = set(target)
    for i in wanted:
        if not 0 <= i < part.n_samples:
            raise ConfigError(f"target index {i} outside 0..{part.n_samples - 1}")
    lower: set[int] = set()
    upper: set[int] = set()
    for block in part.blocks:
        members = set(block)
        if members <= wanted:
            lower |= members
        if members & wanted:
            upper |= members
    return Approximation(lower=frozenset(lower), upper=frozenset(upper))


def positive_region(table: DecisionTable, attrs: Iterable[str]) -> frozenset[int]:
    """Rows in label-pure indiscernibility blocks."""
    part = partition(table, attrs)
    pos: set[int] = set()
    for block in part.blocks:
        first = table.labels[block[0]]
        if all(table.labels[i] == first for i in block):
            pos.update(block)
    return frozenset(pos)


def significance(table: DecisionTable, attrs: Iterable[str]) -> float:
    if table.n_samples == 0:
        raise ConfigError("cannot score an empty table")
    return len(positive_region(table, attrs)) / table.n_samples


def most_significant_call(table: DecisionTable) -> str:
    """Single call with the largest significance; ties break lexicographically."""
    if not table.calls:
        raise ConfigError("table has no attributes")
    best_name, best_size = None, -1
    for name in sorted(table.calls):
        size = len(positive_region(table, [name]))
        if size > best_size:
            best_name, best_size = name, size
    return best_name


def _labels01(table: DecisionTable) -> np.ndarray:
    return np.fromiter(
        (1 if lab == "M" else 0 for lab in table.labels), dtype=np.int64,
        count=table.n_samples,
    )


def _refine(ids: np.ndarray, column: np.ndarray) -> np.ndarray:
    # Bin values are 1..4, so base 5 keeps keys collision free; recompressing
    # through unique keeps ids small across rounds.
    combined = ids * 5 + column
    _, new_ids = np.unique(combined, return_inverse=True)
    return new_ids


def _pos_size(ids: np.ndarray, y01: np.ndarray) -> int:
    k = int(ids.max()) + 1 if ids.size else 0
    ones = np.bincount(ids[y01 == 1], minlength=k)
    zeros = np.bincount(ids[y01 == 0], minlength=k)
    pure = (ones == 0) | (zeros == 0)
    return int((ones + zeros)[pure].sum())


def generate_reduct(table: DecisionTable) -> Reduct:
    """Greedy forward selection with one backward minimality pass.

    Each round adds the attribute maximizing the resulting significance
    (ties lexicographic). When no strict improvement exists but the full
    attribute set scores higher, the tie-broken argmax is added anyway, so
    the loop cannot stall below the attainable significance. The backward
    pass walks the additions in reverse and drops any attribute whose
    removal leaves significance unchanged.
    """
    if not table.calls:
        raise ConfigError("table has no attributes")
    if table.n_samples == 0:
        raise ConfigError("cannot reduce an empty table")
    if len(set(table.labels)) < 2:
        raise ConfigError("reduct needs both labels present")

    y01 = _labels01(table)
    n = table.n_samples
    col = {name: j for j, name in enumerate(table.calls)}
    bins = table.bins.astype(np.int64)

    ids_all = np.zeros(n, dtype=np.int64)
    for name in table.calls:
        ids_all = _refine(ids_all, bins[:, col[name]])
    target = _pos_size(ids_all, y01)

    chosen: list[str] = []
    steps: list[ReductStep] = []
    remaining = sorted(table.calls)
    ids = np.zeros(n, dtype=np.int64)
    current = _pos_size(ids, y01)
    while remaining:
        best_name, best_size, best_ids = None, -1, None
        for name in remaining:
            cand = _refine(ids, bins[:, col[name]])
            size = _pos_size(cand, y01)
            if size > best_size:
                best_name, best_size, best_ids = name, size, cand
        chosen.append(best_name)
        remaining.remove(best_name)
        ids, current = best_ids, best_size
        steps.append(ReductStep(call=best_name, significance=best_size / n))
        if current >= target:
            break

    def _score(names: Sequence[str]) -> int:
        ids = np.zeros(n, dtype=np.int64)
        for name in names:
            ids = _refine(ids, bins[:, col[name]])
        return _pos_size(ids, y01)

    kept = list(chosen)
    removed: list[str] = []
    for name in reversed(chosen):
        trial = [c for c in kept if c != name]
        if _score(trial) == current:
            kept = trial
            removed.append(name)

    return Reduct(
        steps=tuple(steps),
        removed_in_backward_pass=tuple(removed),
        final_significance=steps[-1].significance,
    )
