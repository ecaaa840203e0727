"""Cross-validated evaluation of ranked feature lists.

The sweep trains the bagged-tree classifier on growing prefixes of a
feature ranking under stratified k-fold cross validation, reports the
confusion-derived metrics per length, and closes with average and
standard deviation rows across lengths.

paper_auc is the confusion-matrix expression 0.5*(TP/(TP+FP) +
TN/(TN+FP)), kept verbatim and named apart from roc_auc, the usual
rank-based probability that a malware sample outranks a benign one.
"""
from __future__ import annotations

import csv
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from .errors import ConfigError
from .featurize import FeatureVectorTable
from .forest import DEFAULT_MAX_DEPTH, DEFAULT_TREES, predict, predict_scores, train

METRIC_NAMES = ("acc", "fpr", "paper_auc", "roc_auc", "f1")


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def as_dict(self) -> dict:
        return {"tp": self.tp, "tn": self.tn, "fp": self.fp, "fn": self.fn}

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(
            tp=self.tp + other.tp,
            tn=self.tn + other.tn,
            fp=self.fp + other.fp,
            fn=self.fn + other.fn,
        )


@dataclass(frozen=True)
class MetricSet:
    acc: float
    fpr: float
    paper_auc: float
    f1: float


def _ratio(num: float, den: float) -> float:
    return num / den if den != 0 else 0.0


def metrics(cm: ConfusionMatrix) -> MetricSet:
    """Confusion-matrix metrics with every 0/0 term defined as 0."""
    acc = _ratio(cm.tp + cm.tn, cm.total)
    fpr = _ratio(cm.fp, cm.fp + cm.tn)
    paper_auc = 0.5 * (_ratio(cm.tp, cm.tp + cm.fp) + _ratio(cm.tn, cm.tn + cm.fp))
    precision = _ratio(cm.tp, cm.tp + cm.fp)
    recall = _ratio(cm.tp, cm.tp + cm.fn)
    f1 = _ratio(2.0 * precision * recall, precision + recall)
    return MetricSet(acc=acc, fpr=fpr, paper_auc=paper_auc, f1=f1)


def roc_auc(scores: Sequence[float], labels: Sequence[str]) -> float:
    """Probability a random malware score outranks a random benign one; ties count half."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size != len(labels):
        raise ConfigError("scores and labels must have equal length")
    y = np.fromiter((1 if lab == "M" else 0 for lab in labels), dtype=np.int64)
    n1 = int(y.sum())
    n0 = y.size - n1
    if n1 == 0 or n0 == 0:
        raise ConfigError("roc_auc needs both labels present")
    ranks = rankdata(scores)
    rank_sum = float(ranks[y == 1].sum())
    return (rank_sum - n1 * (n1 + 1) / 2.0) / (n1 * n0)


def stratified_folds(labels: Sequence[str], k: int, seed: int) -> list[np.ndarray]:
    """Deterministic stratified split into k folds of test indices.

    Each class's shuffled indices are dealt out in k near-equal chunks, so
    per-fold class counts stay within one sample of n_class/k.
    """
    if k < 2:
        raise ConfigError(f"fold count must be >= 2, got {k}")
    labels = list(labels)
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    for cls in sorted(set(labels)):
        idx = np.array([i for i, lab in enumerate(labels) if lab == cls])
        if idx.size < k:
            raise ConfigError(
                f"class {cls} has {idx.size} samples, fewer than {k} folds"
            )
        rng.shuffle(idx)
        base, extra = divmod(idx.size, k)
        start = 0
        for i in range(k):
            size = base + (1 if i < extra else 0)
            folds[i].extend(idx[start:start + size].tolist())
            start += size
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


def _fold_seed(seed: int, length: int, fold: int) -> int:
    return int(np.random.SeedSequence((seed, length, fold)).generate_state(1)[0])


def _confusion(actual: Sequence[str], predicted: Sequence[str]) -> ConfusionMatrix:
    tp = sum(1 for a, p in zip(actual, predicted) if a == "M" and p == "M")
    tn = sum(1 for a, p in zip(actual, predicted) if a == "B" and p == "B")
    fp = sum(1 for a, p in zip(actual, predicted) if a == "B" and p == "M")
    fn = sum(1 for a, p in zip(actual, predicted) if a == "M" and p == "B")
    return ConfusionMatrix(tp=tp, tn=tn, fp=fp, fn=fn)


@dataclass(frozen=True)
class LengthResult:
    length: int
    acc: float
    fpr: float
    paper_auc: float
    roc_auc: float
    f1: float
    folds: tuple[ConfusionMatrix, ...]
    train_seconds: float

    def metric_dict(self) -> dict:
        return {
            "acc": self.acc,
            "fpr": self.fpr,
            "paper_auc": self.paper_auc,
            "roc_auc": self.roc_auc,
            "f1": self.f1,
        }


@dataclass(frozen=True)
class EvalReport:
    rows: tuple[LengthResult, ...]
    average: dict[str, float]
    std_dev: dict[str, float]
    folds: int
    seed: int

    def to_json_dict(self, include_timing: bool = False) -> dict:
        # Timing is deliberately left out of the canonical report so reruns
        # with the same seed produce identical bytes.
        rows = []
        for r in self.rows:
            row = {"length": r.length, **r.metric_dict(),
                   "folds": [cm.as_dict() for cm in r.folds]}
            if include_timing:
                row["train_seconds"] = r.train_seconds
            rows.append(row)
        return {"rows": rows, "average": self.average, "std_dev": self.std_dev}

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["length", *METRIC_NAMES])
            for r in self.rows:
                writer.writerow([r.length] + [f"{r.metric_dict()[m]:.6f}" for m in METRIC_NAMES])
            writer.writerow(["average"] + [f"{self.average[m]:.6f}" for m in METRIC_NAMES])
            writer.writerow(["std_dev"] + [f"{self.std_dev[m]:.6f}" for m in METRIC_NAMES])


def cross_validate(
    X: np.ndarray,
    labels: Sequence[str],
    fold_indices: Sequence[np.ndarray],
    seed: int,
    length_tag: int,
    trees_count: int,
    max_depth: int,
) -> tuple[list[ConfusionMatrix], np.ndarray, float]:
    """Train/test over the folds; returns per-fold confusions, out-of-fold scores, train time."""
    labels = list(labels)
    n = len(labels)
    oof = np.zeros(n, dtype=np.float64)
    fold_cms: list[ConfusionMatrix] = []
    spent = 0.0
    for i, test_idx in enumerate(fold_indices):
        test_mask = np.zeros(n, dtype=bool)
        test_mask[test_idx] = True
        train_idx = np.flatnonzero(~test_mask)
        t0 = time.perf_counter()
        model = train(
            X[train_idx],
            [labels[j] for j in train_idx],
            seed=_fold_seed(seed, length_tag, i),
            trees_count=trees_count,
            max_depth=max_depth,
        )
        spent += time.perf_counter() - t0
        predicted = predict(model, X[test_idx])
        oof[test_idx] = predict_scores(model, X[test_idx])
        fold_cms.append(_confusion([labels[j] for j in test_idx], predicted))
    return fold_cms, oof, spent


def sweep(
    fvt: FeatureVectorTable,
    ranking: Sequence[str],
    lengths: Sequence[int],
    folds: int = 10,
    seed: int = 42,
    trees_count: int = DEFAULT_TREES,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> EvalReport:
    """Evaluate ranking prefixes of the given lengths under k-fold CV."""
    if not lengths:
        raise ConfigError("lengths must not be empty")
    ranking = list(ranking)
    for length in lengths:
        if not 1 <= length <= len(ranking):
            raise ConfigError(
                f"requested {length} of {len(ranking)} ranked features"
            )
    fold_indices = stratified_folds(fvt.labels, folds, seed)
    rows: list[LengthResult] = []
    for length in lengths:
        sub = fvt.restrict(ranking[:length])
        fold_cms, oof, spent = cross_validate(
            sub.weights, sub.labels, fold_indices, seed, length, trees_count, max_depth
        )
        summed = ConfusionMatrix(0, 0, 0, 0)
        for cm in fold_cms:
            summed = summed + cm
        ms = metrics(summed)
        rows.append(
            LengthResult(
                length=length,
                acc=ms.acc,
                fpr=ms.fpr,
                paper_auc=ms.paper_auc,
                roc_auc=roc_auc(oof, sub.labels),
                f1=ms.f1,
                folds=tuple(fold_cms),
                train_seconds=spent,
            )
        )
    average = {
        m: float(np.mean([r.metric_dict()[m] for r in rows])) for m in METRIC_NAMES
    }
    std_dev = {
        m: float(np.std([r.metric_dict()[m] for r in rows])) for m in METRIC_NAMES
    }
    return EvalReport(
        rows=tuple(rows), average=average, std_dev=std_dev, folds=folds, seed=seed
    )
