"""Command line front end.

Subcommands: ingest, featurize, select, eval, synth, oracle-check.
Handled failures exit with code 2 and a JSON error object on stderr.
Reports embed the semantic configuration (seed, thresholds, method) but
not filesystem paths, so identical runs produce identical bytes wherever
their outputs land. Environment variables are never consulted.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import baselines, evaluate, ztest
from .errors import CallSelectError, ConfigError
from .featurize import (
    FeatureVectorTable,
    build_fvt,
    discretize,
    read_decision_table_csv,
    relative_frequency_table,
)
from .ingest import (
    ingest_corpus,
    read_manifest,
    read_records_jsonl,
    write_records_jsonl,
)
from .oracles import exhaustive_reduct, naive_positive_region, random_decision_table
from .roughset import generate_reduct, positive_region, significance
from .synth import default_spec, generate

METHODS = ("rsst", "roughset", "ig", "chi", "su")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102 - argparse hook
        raise ConfigError(message)


def _dump_json(obj: dict, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _written(*paths: Path) -> int:
    print(json.dumps({"written": [str(p) for p in paths]}))
    return 0


def _parse_lengths(text: str) -> list[int]:
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        if not piece:
            continue
        try:
            out.append(int(piece))
        except ValueError:
            raise ConfigError(f"bad length {piece!r} in --lengths") from None
    if not out:
        raise ConfigError("--lengths must name at least one integer")
    return out


def _cmd_ingest(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = ingest_corpus(read_manifest(args.manifest))
    records_path = out_dir / "records.jsonl"
    write_records_jsonl(result.records, records_path)
    totals: dict[str, int] = {}
    files = []
    for s in result.summaries:
        files.append({"sample_id": s.sample_id, "path": s.path, "lines": s.by_kind})
        for kind, n in s.by_kind.items():
            totals[kind] = totals.get(kind, 0) + n
    summary_path = out_dir / "summary.json"
    _dump_json(
        {
            "config": {"command": "ingest"},
            "files": files,
            "totals": totals,
            "records": len(result.records),
        },
        summary_path,
    )
    return _written(records_path, summary_path)


def _cmd_featurize(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = read_records_jsonl(args.records)
    fvt = build_fvt(records, min_df=args.min_df)
    fvt_path = out_dir / "fvt.csv"
    fvt.to_csv(fvt_path)
    table_path = out_dir / "decision_table.csv"
    discretize(fvt).to_csv(table_path)
    return _written(fvt_path, table_path)


def _surrogate_fvt(table) -> FeatureVectorTable:
    # Bin midpoints re-discretize to the same bins, so a pre-binned fixture
    # can still drive the z stage.
    return FeatureVectorTable(
        sample_ids=table.sample_ids,
        calls=table.calls,
        weights=table.bins.astype(np.float64) * 0.25 - 0.125,
        labels=table.labels,
    )


def _cmd_select(args) -> int:
    if bool(args.records) == bool(args.decision_table):
        raise ConfigError("pass exactly one of --records or --decision-table")
    config = {
        "command": "select",
        "method": args.method,
        "seed": args.seed,
        "alpha": args.alpha,
        "z_crit": args.z_crit,
        "sigma_as_stddev": args.sigma_as_stddev,
        "z_candidates": args.z_candidates,
        "z_weights": args.z_weights,
        "min_df": args.min_df,
        "top_k": args.top_k,
    }
    if args.decision_table:
        table = read_decision_table_csv(args.decision_table)
        fvt = _surrogate_fvt(table)
        if args.z_weights != "tfidf":
            raise ConfigError(
                "relative frequencies are unavailable for a pre-binned table"
            )
        z_table = fvt
    else:
        records = read_records_jsonl(args.records)
        fvt = build_fvt(records, min_df=args.min_df)
        table = discretize(fvt)
        z_table = (
            fvt
            if args.z_weights == "tfidf"
            else relative_frequency_table(records, min_df=args.min_df)
        )

    report: dict = {"config": config, "method": args.method}
    if args.method in ("rsst", "roughset"):
        reduct = generate_reduct(table)
        report["reduct"] = reduct.to_json_dict()
        if args.method == "rsst":
            candidates = (
                reduct.calls if args.z_candidates == "reduct" else z_table.calls
            )
            result = ztest.filter_calls(
                z_table,
                candidates,
                alpha=args.alpha,
                z_crit=args.z_crit,
                sigma_as_stddev=args.sigma_as_stddev,
            )
            report["z_filter"] = result.to_json_dict()
            report["ranking"] = ztest.eval_ranking(result)
            report["ranking_order"] = "abs_z_desc_then_rejected"
        else:
            report["ranking"] = list(reduct.calls)
            report["ranking_order"] = "significance_step_order"
    else:
        ranked = baselines.rank(fvt, args.method, k=args.top_k)
        report["ranking_table"] = [
            {"call": f.call, "score": f.score} for f in ranked
        ]
        report["ranking"] = [f.call for f in ranked]
        report["ranking_order"] = "score_desc"
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    _dump_json(report, out)
    return _written(out)


def _cmd_eval(args) -> int:
    records = read_records_jsonl(args.records)
    fvt = build_fvt(records, min_df=args.min_df)
    try:
        selection = json.loads(Path(args.selection).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read selection report {args.selection!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"selection report is not valid JSON: {exc}") from exc
    ranking = selection.get("ranking")
    if not isinstance(ranking, list) or not ranking:
        raise ConfigError("selection report carries no ranking")
    lengths = _parse_lengths(args.lengths)
    report = evaluate.sweep(
        fvt,
        ranking,
        lengths,
        folds=args.folds,
        seed=args.seed,
        trees_count=args.trees,
        max_depth=args.max_depth,
    )
    config = {
        "command": "eval",
        "seed": args.seed,
        "folds": args.folds,
        "trees": args.trees,
        "max_depth": args.max_depth,
        "min_df": args.min_df,
        "lengths": lengths,
        "selection_method": selection.get("method"),
    }
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    _dump_json({"config": config, **report.to_json_dict()}, out)
    for row in report.rows:
        print(
            f"length {row.length}: trained {args.folds} folds "
            f"in {row.train_seconds:.2f}s",
            file=sys.stderr,
        )
    written = [out]
    if args.csv:
        csv_path = Path(args.csv)
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        report.to_csv(csv_path)
        written.append(csv_path)
    return _written(*written)


def _cmd_synth(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = default_spec(
        samples_per_class=args.samples_per_class,
        vocabulary_size=args.vocabulary_size,
        planted_malware=args.planted_malware,
        planted_benign=args.planted_benign,
        effect_size=args.effect_size,
        noise_std=args.noise_std,
        seed=args.seed,
    )
    records, key = generate(spec)
    records_path = out_dir / "records.jsonl"
    write_records_jsonl(records, records_path)
    key_path = out_dir / "answer_key.json"
    _dump_json(
        {
            "config": {
                "command": "synth",
                "samples_per_class": spec.samples_per_class,
                "vocabulary_size": spec.vocabulary_size,
                "effect_size": spec.effect_size,
                "noise_std": spec.noise_std,
                "seed": spec.seed,
            },
            **key.to_json_dict(),
        },
        key_path,
    )
    return _written(records_path, key_path)


def _cmd_oracle_check(args) -> int:
    rng = np.random.default_rng(args.seed)
    region_checks = 0
    reduct_checks = 0
    mismatches = []
    for _ in range(args.tables):
        table = random_decision_table(
            rng, int(rng.integers(5, 26)), int(rng.integers(2, 9))
        )
        for _ in range(args.subsets):
            k = int(rng.integers(0, len(table.calls) + 1))
            attrs = list(rng.choice(table.calls, size=k, replace=False))
            region_checks += 1
            if positive_region(table, attrs) != naive_positive_region(table, attrs):
                mismatches.append({"kind": "positive_region", "attrs": sorted(attrs)})
    for _ in range(args.reduct_tables):
        table = random_decision_table(
            rng, int(rng.integers(5, 21)), int(rng.integers(2, 8))
        )
        reduct_checks += 1
        greedy = generate_reduct(table)
        best = exhaustive_reduct(table)
        if abs(greedy.final_significance - best.best_significance) > 1e-12:
            mismatches.append({"kind": "reduct", "greedy": greedy.final_significance,
                               "exhaustive": best.best_significance})
        if abs(significance(table, greedy.calls) - best.best_significance) > 1e-12:
            mismatches.append({"kind": "reduct_calls", "calls": list(greedy.calls)})
    print(
        json.dumps(
            {
                "config": {"command": "oracle-check", "seed": args.seed},
                "positive_region_checks": region_checks,
                "reduct_checks": reduct_checks,
                "mismatches": mismatches,
            },
            sort_keys=True,
        )
    )
    return 0 if not mismatches else 1


def build_parser() -> _Parser:
    parser = _Parser(prog="callselect", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse trace logs named by a manifest CSV")
    p.add_argument("--manifest", required=True, help="CSV with header path,label,sample_id")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("featurize", help="build the weighted and binned feature tables")
    p.add_argument("--records", required=True, help="records.jsonl from ingest or synth")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--min-df", type=int, default=1)
    p.set_defaults(func=_cmd_featurize)

    p = sub.add_parser("select", help="rank calls with one of the selectors")
    p.add_argument("--records", help="records.jsonl input")
    p.add_argument(
        "--decision-table",
        help="pre-binned decision table CSV; the z stage runs on bin midpoints",
    )
    p.add_argument("--method", required=True, choices=METHODS)
    p.add_argument("--out", required=True, help="selection report JSON path")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--z-crit", type=float, default=None)
    p.add_argument("--sigma-as-stddev", action="store_true",
                   help="use standard deviations instead of variances in the z denominator")
    p.add_argument("--z-candidates", choices=("reduct", "all"), default="reduct")
    p.add_argument("--z-weights", choices=("tfidf", "relfreq"), default="tfidf")
    p.add_argument("--min-df", type=int, default=1)
    p.add_argument("--top-k", type=int, default=None)
    p.set_defaults(func=_cmd_select)

    p = sub.add_parser("eval", help="cross-validated sweep over ranking prefixes")
    p.add_argument("--records", required=True)
    p.add_argument("--selection", required=True, help="selection report JSON")
    p.add_argument("--lengths", required=True, help="comma separated prefix lengths")
    p.add_argument("--out", required=True)
    p.add_argument("--csv", default=None, help="optional CSV mirror of the report")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--trees", type=int, default=100)
    p.add_argument("--max-depth", type=int, default=16)
    p.add_argument("--min-df", type=int, default=1)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("synth", help="draw a synthetic corpus with a planted answer key")
    p.add_argument("--samples-per-class", type=int, default=200)
    p.add_argument("--vocabulary-size", type=int, default=50)
    p.add_argument("--planted-malware", type=int, default=3)
    p.add_argument("--planted-benign", type=int, default=2)
    p.add_argument("--effect-size", type=float, default=4.0)
    p.add_argument("--noise-std", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("oracle-check", help="randomized equivalence battery against the brute-force oracles")
    p.add_argument("--tables", type=int, default=25)
    p.add_argument("--subsets", type=int, default=10)
    p.add_argument("--reduct-tables", type=int, default=10)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=_cmd_oracle_check)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # argparse --help
        code = exc.code
        return code if isinstance(code, int) else 0
    except CallSelectError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(payload, sort_keys=True), file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
