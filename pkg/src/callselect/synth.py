"""Synthetic call-count corpora with a planted answer key.

Counts are rounded truncated normals (never negative). Every call gets a
base mean shared by both classes; planted calls additionally receive an
effect_size shift inside their own class. Base means are drawn from
U(2, 10) for unplanted calls and U(1, 2) for planted ones; the low
planted base keeps the call absent from part of the off-class samples,
so presence as well as magnitude carries the signal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .ingest import CallCountRecord

_NULL_MEAN_RANGE = (2.0, 10.0)
_PLANTED_MEAN_RANGE = (1.0, 2.0)


@dataclass(frozen=True)
class SynthSpec:
    samples_per_class: int
    vocabulary_size: int
    planted_malware_calls: tuple[str, ...]
    planted_benign_calls: tuple[str, ...]
    effect_size: float
    noise_std: float
    seed: int

    def validate(self) -> None:
        if self.samples_per_class < 1:
            raise ConfigError("samples_per_class must be >= 1")
        if self.vocabulary_size < 1:
            raise ConfigError("vocabulary_size must be >= 1")
        if self.effect_size < 0:
            raise ConfigError("effect_size must be >= 0")
        if self.noise_std < 0:
            raise ConfigError("noise_std must be >= 0")
        vocab = set(vocabulary(self))
        mal = set(self.planted_malware_calls)
        ben = set(self.planted_benign_calls)
        if mal & ben:
            raise ConfigError("planted call lists must be disjoint")
        unknown = (mal | ben) - vocab
        if unknown:
            raise ConfigError(
                f"planted call {sorted(unknown)[0]!r} is outside the vocabulary"
            )


@dataclass(frozen=True)
class AnswerKey:
    planted_malware_calls: tuple[str, ...]
    planted_benign_calls: tuple[str, ...]
    effect_size: float
    noise_std: float
    seed: int

    def to_json_dict(self) -> dict:
        return {
            "planted_malware_calls": list(self.planted_malware_calls),
            "planted_benign_calls": list(self.planted_benign_calls),
            "effect_size": self.effect_size,
            "noise_std": self.noise_std,
            "seed": self.seed,
        }


def vocabulary(spec: SynthSpec) -> list[str]:
    return [f"c{i:03d}" for i in range(spec.vocabulary_size)]


def default_spec(
    samples_per_class: int = 200,
    vocabulary_size: int = 50,
    planted_malware: int = 3,
    planted_benign: int = 2,
    effect_size: float = 4.0,
    noise_std: float = 2.0,
    seed: int = 42,
) -> SynthSpec:
    """Convenience constructor naming planted calls off the vocabulary head."""
    if planted_malware + planted_benign > vocabulary_size:
        raise ConfigError("more planted calls than vocabulary entries")
    names = [f"c{i:03d}" for i in range(vocabulary_size)]
    spec = SynthSpec(
        samples_per_class=samples_per_class,
        vocabulary_size=vocabulary_size,
        planted_malware_calls=tuple(names[:planted_malware]),
        planted_benign_calls=tuple(names[planted_malware:planted_malware + planted_benign]),
        effect_size=effect_size,
        noise_std=noise_std,
        seed=seed,
    )
    spec.validate()
    return spec


def generate(spec: SynthSpec) -> tuple[list[CallCountRecord], AnswerKey]:
    """Deterministically draw the corpus; record order is all M then all B."""
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    vocab = vocabulary(spec)
    planted = set(spec.planted_malware_calls) | set(spec.planted_benign_calls)
    base = np.empty(len(vocab), dtype=np.float64)
    for j, name in enumerate(vocab):
        lo, hi = _PLANTED_MEAN_RANGE if name in planted else _NULL_MEAN_RANGE
        base[j] = rng.uniform(lo, hi)
    mal_mask = np.array([name in spec.planted_malware_calls for name in vocab])
    ben_mask = np.array([name in spec.planted_benign_calls for name in vocab])
    mean_m = base + spec.effect_size * mal_mask
    mean_b = base + spec.effect_size * ben_mask

    records: list[CallCountRecord] = []
    for label, mean, prefix in (("M", mean_m, "M"), ("B", mean_b, "B")):
        n = spec.samples_per_class
        raw = rng.normal(loc=mean, scale=spec.noise_std, size=(n, len(vocab)))
        counts = np.clip(np.rint(raw), 0, None).astype(np.int64)
        for i in range(n):
            row = {
                vocab[j]: int(counts[i, j])
                for j in range(len(vocab))
                if counts[i, j] > 0
            }
            records.append(
                CallCountRecord(
                    sample_id=f"{prefix}{i:04d}",
                    label=label,
                    counts=row,
                    total_calls=int(sum(row.values())),
                )
            )
    key = AnswerKey(
        planted_malware_calls=spec.planted_malware_calls,
        planted_benign_calls=spec.planted_benign_calls,
        effect_size=spec.effect_size,
        noise_std=spec.noise_std,
        seed=spec.seed,
    )
    return records, key
