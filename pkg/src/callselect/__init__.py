"""Feature selection laboratory for system-call traces.

Pipeline: parse strace-style logs into call counts, weight them with
tf-idf, discretize into four bins, pick calls with a greedy
dependency-preserving reduct, filter the survivors with a two-sample z
test, and evaluate ranked prefixes with a bagged-tree classifier under
stratified cross validation. Entropy, chi-square, and symmetric
uncertainty rankers serve as baselines, and a synthetic corpus generator
plus brute-force oracles back the test suite.
"""

from .baselines import (
    RankedFeature,
    chi_square,
    entropy_bits,
    information_gain,
    rank,
    symmetric_uncertainty,
)
from .errors import CallSelectError, ConfigError, InvariantError
from .evaluate import (
    ConfusionMatrix,
    EvalReport,
    MetricSet,
    metrics,
    roc_auc,
    stratified_folds,
    sweep,
)
from .featurize import (
    BIN_LABELS,
    DecisionTable,
    FeatureVectorTable,
    GraphFeatureRow,
    build_fvt,
    discretize,
    graph_features,
    minmax_columns,
    read_decision_table_csv,
    relative_frequency_table,
)
from .forest import TreeEnsemble, predict, predict_scores, train
from .ingest import (
    CallCountRecord,
    IngestResult,
    ParseSummary,
    TraceLine,
    call_sequence,
    ingest_corpus,
    parse_line,
    parse_log,
    parse_log_detailed,
    read_manifest,
    read_records_jsonl,
    write_records_jsonl,
)
from .oracles import (
    ExhaustiveResult,
    exhaustive_reduct,
    naive_positive_region,
    pairwise_roc_auc,
    random_decision_table,
)
from .roughset import (
    Approximation,
    Partition,
    Reduct,
    ReductStep,
    approximate,
    generate_reduct,
    most_significant_call,
    partition,
    positive_region,
    significance,
)
from .synth import AnswerKey, SynthSpec, default_spec, generate, vocabulary
from .ztest import (
    ClassStats,
    StatFilterResult,
    ZVerdict,
    class_stats,
    critical_value,
    eval_ranking,
    filter_calls,
    z_score,
)

__version__ = "0.1.0"
