"""Feature tables: tf-idf weighting, normalization, binning, graph degrees."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from callselect import (
    BIN_LABELS,
    CallCountRecord,
    ConfigError,
    FeatureVectorTable,
    InvariantError,
    build_fvt,
    discretize,
    graph_features,
    minmax_columns,
    read_decision_table_csv,
    relative_frequency_table,
)

from conftest import GOLDEN_BINS, GOLDEN_CALLS, GOLDEN_IDS, GOLDEN_LABELS


def _rec(sample_id, label, counts):
    return CallCountRecord(
        sample_id=sample_id,
        label=label,
        counts=counts,
        total_calls=sum(counts.values()),
    )


@pytest.fixture
def tiny_corpus():
    return [
        _rec("r1", "M", {"open": 2, "read": 2}),
        _rec("r2", "B", {"read": 5}),
        _rec("r3", "M", {"open": 1, "write": 1}),
    ]


def test_tfidf_worked_column(tiny_corpus):
    # open appears in 2 of 3 records with tf 0.5, 0, 0.5
    fvt = build_fvt(tiny_corpus)
    np.testing.assert_allclose(fvt.column("open"), [1.0, 0.0, 1.0], atol=1e-15)
    # and before normalization the raw weight is tf * ln(3/2)
    raw = 0.5 * math.log(1.5)
    assert raw == pytest.approx(0.2027325540540822)


def test_tfidf_other_columns(tiny_corpus):
    fvt = build_fvt(tiny_corpus)
    assert fvt.calls == ("open", "read", "write")
    # read: tf (0.5, 1.0, 0) scaled by the shared idf, so minmax keeps ratios
    np.testing.assert_allclose(fvt.column("read"), [0.5, 1.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(fvt.column("write"), [0.0, 0.0, 1.0], atol=1e-15)
    assert fvt.labels == ("M", "B", "M")


def test_full_presence_call_zeroes_out():
    # df == r makes idf = ln(1) = 0, so the column is constant and maps to 0
    recs = [
        _rec("a", "M", {"mmap": 3, "open": 1}),
        _rec("b", "B", {"mmap": 1}),
    ]
    fvt = build_fvt(recs)
    np.testing.assert_array_equal(fvt.column("mmap"), [0.0, 0.0])
    np.testing.assert_allclose(fvt.column("open"), [1.0, 0.0])


def test_min_df_prunes_rare_calls(tiny_corpus):
    fvt = build_fvt(tiny_corpus, min_df=2)
    assert fvt.calls == ("open", "read")
    with pytest.raises(ConfigError, match="empty vocabulary"):
        build_fvt(tiny_corpus, min_df=4)


def test_corpus_validation():
    with pytest.raises(ConfigError):
        build_fvt([_rec("a", "M", {"x": 1})])  # single record
    with pytest.raises(ConfigError):
        build_fvt([_rec("a", "M", {"x": 1}), _rec("b", "M", {"x": 2})])  # one class
    with pytest.raises(ConfigError, match="dup"):
        build_fvt(
            [_rec("dup", "M", {"x": 1}), _rec("dup", "B", {"x": 2})]
        )


def test_relative_frequency_rows_sum_to_one(tiny_corpus):
    fvt = relative_frequency_table(tiny_corpus)
    np.testing.assert_allclose(fvt.weights.sum(axis=1), [1.0, 1.0, 1.0])
    assert fvt.column("read")[1] == 1.0


def test_bin_ranges():
    fvt = FeatureVectorTable(
        sample_ids=("a", "b"),
        calls=("u", "v"),
        weights=np.array([[0.1, 0.3], [0.6, 0.9]]),
        labels=("M", "B"),
    )
    table = discretize(fvt)
    assert BIN_LABELS == ("B1", "B2", "B3", "B4")
    np.testing.assert_array_equal(table.bins, [[1, 2], [3, 4]])


def test_bin_boundaries_right_closed():
    w = np.array([[0.0], [0.25], [0.250001], [0.5], [0.75], [0.750001], [1.0]])
    fvt = FeatureVectorTable(
        sample_ids=tuple(f"s{i}" for i in range(7)),
        calls=("c",),
        weights=w,
        labels=("M", "B", "M", "B", "M", "B", "M"),
    )
    got = discretize(fvt).bins[:, 0]
    np.testing.assert_array_equal(got, [1, 1, 2, 2, 3, 4, 4])


def test_discretize_rejects_out_of_range():
    fvt = FeatureVectorTable(
        sample_ids=("a", "b"),
        calls=("c",),
        weights=np.array([[0.2], [1.2]]),
        labels=("M", "B"),
    )
    with pytest.raises(InvariantError):
        discretize(fvt)


def test_restrict_keeps_requested_columns(tiny_corpus):
    fvt = build_fvt(tiny_corpus)
    sub = fvt.restrict(["write", "open"])
    assert sub.calls == ("write", "open")
    np.testing.assert_array_equal(sub.column("open"), fvt.column("open"))
    with pytest.raises(ConfigError):
        fvt.restrict(["nope"])


def test_fvt_csv_roundtrip(tmp_path, tiny_corpus):
    fvt = build_fvt(tiny_corpus)
    p = tmp_path / "fvt.csv"
    fvt.to_csv(p)
    header = p.read_text().splitlines()[0]
    assert header == "sample_id,open,read,write,label"


def test_decision_table_csv_fixture_matches_golden(tmp_path):
    import pathlib

    fixture = pathlib.Path(__file__).parent / "data" / "toy_decision_table.csv"
    table = read_decision_table_csv(fixture)
    assert table.sample_ids == GOLDEN_IDS
    assert table.calls == GOLDEN_CALLS
    assert table.labels == GOLDEN_LABELS
    np.testing.assert_array_equal(table.bins, GOLDEN_BINS)
    # and writing it back produces the same file
    out = tmp_path / "again.csv"
    table.to_csv(out)
    assert out.read_text() == fixture.read_text()


def test_decision_table_csv_rejects_bad_bin(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("sample_id,s1,label\nx1,B5,M\n")
    with pytest.raises(ConfigError):
        read_decision_table_csv(p)


def test_graph_features_small_sequence():
    row = graph_features(["a", "b", "a"], vocabulary=["a", "b", "c"], sample_id="g")
    np.testing.assert_array_equal(row.out_degrees, [1.0, 1.0, 0.0])
    np.testing.assert_array_equal(row.in_degrees, [1.0, 1.0, 0.0])
    assert row.out_mean == pytest.approx(2 / 3)
    assert row.in_mean == pytest.approx(2 / 3)


def test_graph_features_empty_and_unknown():
    row = graph_features([], vocabulary=["a"])
    assert row.in_mean == 0.0 and row.out_std == 0.0
    with pytest.raises(ConfigError, match="not in vocabulary"):
        graph_features(["zzz"], vocabulary=["a"])


@given(
    st.lists(
        st.floats(min_value=-50, max_value=50, allow_nan=False),
        min_size=1,
        max_size=30,
    )
)
def test_minmax_idempotent(values):
    col = np.array(values, dtype=np.float64).reshape(-1, 1)
    once = minmax_columns(col)
    twice = minmax_columns(once)
    assert once.min() >= 0.0 and once.max() <= 1.0
    np.testing.assert_array_equal(once, twice)


@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_graph_degree_sums_match_edge_count(seed):
    rng = np.random.default_rng(seed)
    vocab = ["a", "b", "c", "d"]
    seq = [vocab[i] for i in rng.integers(0, 4, size=rng.integers(0, 20))]
    row = graph_features(seq, vocabulary=vocab)
    edges = max(0, len(seq) - 1)
    assert row.out_degrees.sum() == edges
    assert row.in_degrees.sum() == edges
