"""Build feature tables from call-count records.

Weighting follows the usual tf-idf recipe: term frequency is a call's
count divided by the sample's total call count, inverse document
frequency is ln(r / df), and each column is then min-max normalized into
[0, 1] so one scale serves every call. Discretization maps the weights
onto four contiguous bins for the rough-set stage.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError, InvariantError
from .ingest import CallCountRecord

BIN_LABELS = ("B1", "B2", "B3", "B4")

# Right-closed bin edges: B1=[0,.25], B2=(.25,.5], B3=(.5,.75], B4=(.75,1].
_BIN_EDGES = np.array([0.25, 0.5, 0.75])


@dataclass(frozen=True)
class FeatureVectorTable:
    """Samples x calls weight matrix with aligned ids and labels."""

    sample_ids: tuple[str, ...]
    calls: tuple[str, ...]
    weights: np.ndarray  # shape (len(sample_ids), len(calls)), float64 in [0, 1]
    labels: tuple[str, ...]

    @property
    def n_samples(self) -> int:
        return len(self.sample_ids)

    def column(self, call: str) -> np.ndarray:
        try:
            j = self.calls.index(call)
        except ValueError:
            raise ConfigError(f"unknown call: {call!r}") from None
        return self.weights[:, j]

    def restrict(self, calls: Sequence[str]) -> "FeatureVectorTable":
        """Project onto the given calls, keeping their order."""
        idx = []
        for c in calls:
            try:
                idx.append(self.calls.index(c))
            except ValueError:
                raise ConfigError(f"unknown call: {c!r}") from None
        return FeatureVectorTable(
            sample_ids=self.sample_ids,
            calls=tuple(calls),
            weights=self.weights[:, idx].copy(),
            labels=self.labels,
        )

    def to_csv(self, path: str | Path) -> None:
        _write_table_csv(path, self.sample_ids, self.calls, self.labels,
                         [[f"{w:.6f}" for w in row] for row in self.weights])


@dataclass(frozen=True)
class DecisionTable:
    """Discretized table: conditional attributes are calls, decision is the label."""

    sample_ids: tuple[str, ...]
    calls: tuple[str, ...]
    bins: np.ndarray  # shape (samples, calls), int8 values 1..4
    labels: tuple[str, ...]

    @property
    def n_samples(self) -> int:
        return len(self.sample_ids)

    def to_csv(self, path: str | Path) -> None:
        names = [[BIN_LABELS[b - 1] for b in row] for row in self.bins]
        _write_table_csv(path, self.sample_ids, self.calls, self.labels, names)


def _write_table_csv(path, sample_ids, calls, labels, cell_rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample_id", *calls, "label"])
        for sid, cells, label in zip(sample_ids, cell_rows, labels):
            writer.writerow([sid, *cells, label])


def read_decision_table_csv(path: str | Path) -> DecisionTable:
    """Read a decision table in the to_csv layout (sample_id first, label last)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read decision table {str(path)!r}: {exc}") from exc
    rows = list(csv.reader(text.splitlines()))
    if not rows or len(rows[0]) < 3 or rows[0][0] != "sample_id" or rows[0][-1] != "label":
        raise ConfigError("decision table header must be sample_id,<calls...>,label")
    calls = tuple(rows[0][1:-1])
    sample_ids, labels, bin_rows = [], [], []
    for row in rows[1:]:
        if len(row) != len(rows[0]):
            raise ConfigError(f"ragged decision table row: {row!r}")
        sample_ids.append(row[0])
        labels.append(row[-1])
        try:
            bin_rows.append([BIN_LABELS.index(cell) + 1 for cell in row[1:-1]])
        except ValueError:
            raise ConfigError(f"bin values must be one of {BIN_LABELS}: {row!r}") from None
    if any(lab not in ("M", "B") for lab in labels):
        raise ConfigError("decision table labels must be M or B")
    return DecisionTable(
        sample_ids=tuple(sample_ids),
        calls=calls,
        bins=np.array(bin_rows, dtype=np.int8),
        labels=tuple(labels),
    )


def _check_corpus(records: Sequence[CallCountRecord]) -> None:
    if len(records) < 2:
        raise ConfigError("need at least 2 records to build a feature table")
    labels = {r.label for r in records}
    if labels != {"M", "B"}:
        raise ConfigError("corpus must contain both labels M and B")
    ids = [r.sample_id for r in records]
    if len(set(ids)) != len(ids):
        raise ConfigError("duplicate sample_id in corpus")


def _vocabulary(records: Sequence[CallCountRecord], min_df: int) -> tuple[list[str], dict[str, int]]:
    df: dict[str, int] = {}
    for r in records:
        for name in r.counts:
            df[name] = df.get(name, 0) + 1
    vocab = sorted(name for name, d in df.items() if d >= min_df)
    if not vocab:
        raise ConfigError("empty vocabulary after min_df filtering")
    return vocab, df


def _tf_matrix(records: Sequence[CallCountRecord], vocab: list[str]) -> np.ndarray:
    col = {name: j for j, name in enumerate(vocab)}
    tf = np.zeros((len(records), len(vocab)), dtype=np.float64)
    for i, r in enumerate(records):
        if r.total_calls == 0:
            continue
        for name, n in r.counts.items():
            j = col.get(name)
            if j is not None:
                tf[i, j] = n / r.total_calls
    return tf


def minmax_columns(matrix: np.ndarray) -> np.ndarray:
    """Min-max normalize each column into [0, 1]; constant columns become 0."""
    lo = matrix.min(axis=0)
    hi = matrix.max(axis=0)
    span = hi - lo
    out = np.zeros_like(matrix, dtype=np.float64)
    varying = span > 0
    out[:, varying] = (matrix[:, varying] - lo[varying]) / span[varying]
    return out


def build_fvt(records: Sequence[CallCountRecord], min_df: int = 1) -> FeatureVectorTable:
    """tf-idf weighted feature table, one row per record, columns sorted by call name."""
    if min_df < 1:
        raise ConfigError(f"min_df must be >= 1, got {min_df}")
    _check_corpus(records)
    vocab, df = _vocabulary(records, min_df)
    tf = _tf_matrix(records, vocab)
    r = len(records)
    idf = np.array([math.log(r / df[name]) for name in vocab])
    return FeatureVectorTable(
        sample_ids=tuple(x.sample_id for x in records),
        calls=tuple(vocab),
        weights=minmax_columns(tf * idf),
        labels=tuple(x.label for x in records),
    )


def relative_frequency_table(
    records: Sequence[CallCountRecord], min_df: int = 1
) -> FeatureVectorTable:
    """Plain term-frequency table (no idf, no normalization); values already in [0, 1]."""
    if min_df < 1:
        raise ConfigError(f"min_df must be >= 1, got {min_df}")
    _check_corpus(records)
    vocab, _ = _vocabulary(records, min_df)
    return FeatureVectorTable(
        sample_ids=tuple(x.sample_id for x in records),
        calls=tuple(vocab),
        weights=_tf_matrix(records, vocab),
        labels=tuple(x.label for x in records),
    )


def discretize(fvt: FeatureVectorTable) -> DecisionTable:
    """Map weights onto the four bins. Weights outside [0, 1] are a bug upstream."""
    w = fvt.weights
    if w.size and (w.min() < 0.0 or w.max() > 1.0):
        raise InvariantError("feature weights must lie in [0, 1] before discretization")
    bins = (np.digitize(w, _BIN_EDGES, right=True) + 1).astype(np.int8)
    return DecisionTable(
        sample_ids=fvt.sample_ids,
        calls=fvt.calls,
        bins=bins,
        labels=fvt.labels,
    )


@dataclass(frozen=True)
class GraphFeatureRow:
    """Weighted in/out degree summary of one call-adjacency graph."""

    sample_id: str
    vocabulary: tuple[str, ...]
    in_degrees: np.ndarray
    out_degrees: np.ndarray
    in_mean: float
    in_std: float
    out_mean: float
    out_std: float


def graph_features(
    sequence: Sequence[str],
    vocabulary: Iterable[str] | None = None,
    sample_id: str = "",
) -> GraphFeatureRow:
    """Directed adjacency graph of consecutive calls, one edge weight per pair occurrence.

    Degree statistics are taken over the full vocabulary, so calls that
    never appear contribute zeros.
    """
    vocab = tuple(sorted(set(sequence))) if vocabulary is None else tuple(vocabulary)
    col = {name: j for j, name in enumerate(vocab)}
    unknown = [c for c in sequence if c not in col]
    if unknown:
        raise ConfigError(f"sequence call {unknown[0]!r} not in vocabulary")
    in_deg = np.zeros(len(vocab), dtype=np.float64)
    out_deg = np.zeros(len(vocab), dtype=np.float64)
    for src, dst in zip(sequence, sequence[1:]):
        out_deg[col[src]] += 1.0
        in_deg[col[dst]] += 1.0
    def _stats(v: np.ndarray) -> tuple[float, float]:
        if v.size == 0:
            return 0.0, 0.0
        return float(v.mean()), float(v.std())
    in_mean, in_std = _stats(in_deg)
    out_mean, out_std = _stats(out_deg)
    return GraphFeatureRow(
        sample_id=sample_id,
        vocabulary=vocab,
        in_degrees=in_deg,
        out_degrees=out_deg,
        in_mean=in_mean,
        in_std=in_std,
        out_mean=out_mean,
        out_std=out_std,
    )
