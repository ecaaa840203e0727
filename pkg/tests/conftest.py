"""Shared fixtures: the seven-sample golden decision table and hypothesis profile."""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from callselect import DecisionTable

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

# Three calls, seven samples. Known by hand:
#   psi(s1)=4/7, psi(s2)=3/7, psi(s3)=5/7,
#   psi({s1,s3})=psi({s1,s2})=1, psi({s2,s3})=5/7,
#   greedy reduct adds s3 then s1 and removes nothing.
GOLDEN_BINS = np.array(
    [
        [1, 4, 1],
        [2, 1, 2],
        [2, 1, 2],
        [2, 2, 1],
        [3, 2, 4],
        [1, 2, 3],
        [3, 2, 3],
    ],
    dtype=np.int8,
)
GOLDEN_LABELS = ("B", "M", "M", "B", "M", "B", "M")
GOLDEN_CALLS = ("s1", "s2", "s3")
GOLDEN_IDS = tuple(f"x{i}" for i in range(1, 8))


@pytest.fixture
def golden_table() -> DecisionTable:
    return DecisionTable(
        sample_ids=GOLDEN_IDS,
        calls=GOLDEN_CALLS,
        bins=GOLDEN_BINS.copy(),
        labels=GOLDEN_LABELS,
    )
