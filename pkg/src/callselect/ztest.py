"""Second-stage filter: two-sample large-population z test per call.

For each candidate call the two class means of its feature weights are
compared with z = (mean_M - mean_B) / sqrt(var_M/n_M + var_B/n_B), using
population variances. Calls pass only when |z| strictly exceeds the
critical value (1.96 at the default alpha of 0.05); survivors are split
into a malware-leaning list (z > 0) and a benign-leaning list (z < 0).

A compatibility switch replaces the variances with standard deviations
inside the square root for callers that need that exact variant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.stats import norm

from .errors import ConfigError
from .featurize import FeatureVectorTable

DEFAULT_ALPHA = 0.05
DEFAULT_Z_CRIT = 1.96


@dataclass(frozen=True)
class ClassStats:
    """Per-class mean and population variance of one call's weights."""

    call: str
    mean_m: float
    mean_b: float
    var_m: float
    var_b: float
    n_m: int
    n_b: int


@dataclass(frozen=True)
class ZVerdict:
    call: str
    z: float | None  # None when the pooled standard error is zero
    rejected_null: bool
    dominant: str  # "M", "B", or "none"


@dataclass(frozen=True)
class StatFilterResult:
    malware: tuple[ZVerdict, ...]  # z > 0, sorted by z descending
    benign: tuple[ZVerdict, ...]  # z < 0, sorted by |z| descending
    rejected: tuple[ZVerdict, ...]
    alpha: float
    z_crit: float

    def to_json_dict(self) -> dict:
        def row(v: ZVerdict) -> dict:
            return {"call": v.call, "z": v.z, "dominant": v.dominant}

        return {
            "alpha": self.alpha,
            "z_crit": self.z_crit,
            "malware_list": [row(v) for v in self.malware],
            "benign_list": [row(v) for v in self.benign],
            "rejected": [row(v) for v in self.rejected],
        }


def class_stats(fvt: FeatureVectorTable, call: str) -> ClassStats:
    column = fvt.column(call)
    labels = np.array(fvt.labels)
    m_vals = column[labels == "M"]
    b_vals = column[labels == "B"]
    for name, vals in (("M", m_vals), ("B", b_vals)):
        if vals.size < 2:
            raise ConfigError(
                f"class {name} has {vals.size} samples; need at least 2 for a z test"
            )
    return ClassStats(
        call=call,
        mean_m=float(m_vals.mean()),
        mean_b=float(b_vals.mean()),
        var_m=float(m_vals.var()),
        var_b=float(b_vals.var()),
        n_m=int(m_vals.size),
        n_b=int(b_vals.size),
    )


def pooled_standard_error(stats: ClassStats, sigma_as_stddev: bool = False) -> float:
    if sigma_as_stddev:
        inner = math.sqrt(stats.var_m) / stats.n_m + math.sqrt(stats.var_b) / stats.n_b
    else:
        inner = stats.var_m / stats.n_m + stats.var_b / stats.n_b
    return math.sqrt(inner)

def z_score(stats: ClassStats, sigma_as_stddev: bool = False) -> float:
    se = pooled_standard_error(stats, sigma_as_stddev)
    if se == 0.0:
        raise ConfigError(
            f"zero pooled standard error for {stats.call!r}; z is undefined"
        )
    return (stats.mean_m - stats.mean_b) / se


def critical_value(alpha: float = DEFAULT_ALPHA, z_crit: float | None = None) -> float:
    """Explicit z_crit wins; the default alpha keeps the conventional 1.96."""
    if z_crit is not None:
        if z_crit <= 0:
            raise ConfigError(f"z_crit must be positive, got {z_crit}")
        return z_crit
    if not 0.0 < alpha < 1.0:
        raise ConfigError(f"alpha must lie in (0, 1), got {alpha}")
    if alpha == DEFAULT_ALPHA:
        return DEFAULT_Z_CRIT
    return float(norm.ppf(1.0 - alpha / 2.0))


def call_verdict(
    fvt: FeatureVectorTable,
    call: str,
    alpha: float = DEFAULT_ALPHA,
    z_crit: float | None = None,
    sigma_as_stddev: bool = False,
) -> ZVerdict:
    crit = critical_value(alpha, z_crit)
    stats = class_stats(fvt, call)
    if pooled_standard_error(stats, sigma_as_stddev) == 0.0:
        return ZVerdict(call=call, z=None, rejected_null=False, dominant="none")
    z = z_score(stats, sigma_as_stddev)
    if abs(z) > crit:
        return ZVerdict(
            call=call, z=z, rejected_null=True, dominant="M" if z > 0 else "B"
        )
    return ZVerdict(call=call, z=z, rejected_null=False, dominant="none")


def filter_calls(
    fvt: FeatureVectorTable,
    candidates: Iterable[str],
    alpha: float = DEFAULT_ALPHA,
    z_crit: float | None = None,
    sigma_as_stddev: bool = False,
) -> StatFilterResult:
    """Split candidates into malware/benign survivor lists plus the rejects."""
    crit = critical_value(alpha, z_crit)
    names = sorted(set(candidates))
    known = set(fvt.calls)
    for name in names:
        if name not in known:
            raise ConfigError(f"candidate {name!r} is not in the feature table")
    verdicts = [
        call_verdict(fvt, name, alpha=alpha, z_crit=crit, sigma_as_stddev=sigma_as_stddev)
        for name in names
    ]
    malware = sorted(
        (v for v in verdicts if v.rejected_null and v.dominant == "M"),
        key=lambda v: (-v.z, v.call),
    )
    benign = sorted(
        (v for v in verdicts if v.rejected_null and v.dominant == "B"),
        key=lambda v: (v.z, v.call),
    )
    rejected = [v for v in verdicts if not v.rejected_null]
    return StatFilterResult(
        malware=tuple(malware),
        benign=tuple(benign),
        rejected=tuple(rejected),
        alpha=alpha,
        z_crit=crit,
    )


def eval_ranking(result: StatFilterResult) -> list[str]:
    """Permutation of the candidates for length sweeps.

    Survivors come first ordered by |z| descending, then rejected calls by
    |z| descending (degenerate verdicts last, alphabetical).
    """

    def sort_key(v: ZVerdict) -> tuple:
        mag = -abs(v.z) if v.z is not None else math.inf
        return (mag, v.call)

    survivors = sorted(list(result.malware) + list(result.benign), key=sort_key)
    rejected = sorted(result.rejected, key=sort_key)
    return [v.call for v in survivors + rejected]
