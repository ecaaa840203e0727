"""Parse strace-style trace logs into per-sample system-call counts.

Parsing is total: every line is classified into exactly one kind and
nothing raises on malformed input. Unparseable lines become "garbage",
which is a classification, not an error. Only completed calls and
unfinished call heads are counted; "resumed" continuations are skipped so
an interrupted call is counted exactly once.
"""
from __future__ import annotations

import csv
import json
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import ConfigError

LINE_KINDS = ("call", "unfinished", "resumed", "signal", "exit", "garbage")

LABELS = ("M", "B")

# Optional pid column emitted by strace -f.
# Example: "1234  close(3) = 0"
_PID_PREFIX = re.compile(r"^\d+\s+")

# A call line starts with the call name, the maximal identifier prefix
# immediately followed by "(".
# Example: 'openat(AT_FDCWD, "/etc/ld.so.cache", O_RDONLY|O_CLOEXEC) = 3'
_CALL_HEAD = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\(")

# Continuation of a call interrupted by a signal or another thread.
# Example: '<... read resumed> "\\x7fELF", 832) = 832'
_RESUMED = re.compile(r"^<\.\.\. ([A-Za-z_][A-Za-z0-9_]*) resumed")


@dataclass(frozen=True)
class TraceLine:
    """One classified log line."""

    raw_text: str
    kind: str
    call_name: str | None = None


@dataclass(frozen=True)
class CallCountRecord:
    """Bag-of-calls summary of one trace."""

    sample_id: str
    label: str
    counts: dict[str, int]
    total_calls: int

    def validate(self) -> None:
        if self.label not in LABELS:
            raise ConfigError(f"label must be one of {LABELS}, got {self.label!r}")
        for name, n in self.counts.items():
            if n < 1:
                raise ConfigError(f"count for {name!r} must be >= 1, got {n}")
        if self.total_calls != sum(self.counts.values()):
            raise ConfigError("total_calls does not equal the sum of counts")


@dataclass(frozen=True)
class ParseSummary:
    """Per-file tally of line kinds."""

    sample_id: str
    path: str
    by_kind: dict[str, int] = field(default_factory=dict)

    def total_lines(self) -> int:
        return sum(self.by_kind.values())


@dataclass(frozen=True)
class IngestResult:
    records: list[CallCountRecord]
    summaries: list[ParseSummary]


def parse_line(line: str) -> TraceLine:
    """Classify one log line. Never raises."""
    text = line.strip()
    text = _PID_PREFIX.sub("", text)
    if not text:
        return TraceLine(line, "garbage")
    if text.startswith("+++") and text.endswith("+++"):
        return TraceLine(line, "exit")
    if text.startswith("---") and text.endswith("---") and len(text) > 6:
        return TraceLine(line, "signal")
    m = _RESUMED.match(text)
    if m:
        return TraceLine(line, "resumed", m.group(1))
    m = _CALL_HEAD.match(text)
    if m:
        rest = text[m.end():]
        if "<unfinished" in rest:
            return TraceLine(line, "unfinished", m.group(1))
        return TraceLine(line, "call", m.group(1))
    return TraceLine(line, "garbage")


def classify_lines(lines: Iterable[str]) -> Iterator[TraceLine]:
    for line in lines:
        yield parse_line(line)


def call_sequence(lines: Iterable[str]) -> list[str]:
    """Ordered call names of the countable lines (call + unfinished)."""
    return [
        t.call_name
        for t in classify_lines(lines)
        if t.kind in ("call", "unfinished") and t.call_name is not None
    ]


def parse_log_detailed(
    lines: Iterable[str], sample_id: str, label: str, path: str = ""
) -> tuple[CallCountRecord, ParseSummary]:
    if label not in LABELS:
        raise ConfigError(f"label must be one of {LABELS}, got {label!r}")
    counts: Counter[str] = Counter()
    kinds = {k: 0 for k in LINE_KINDS}
    for t in classify_lines(lines):
        kinds[t.kind] += 1
        if t.kind in ("call", "unfinished"):
            counts[t.call_name] += 1
    record = CallCountRecord(
        sample_id=sample_id,
        label=label,
        counts=dict(sorted(counts.items())),
        total_calls=sum(counts.values()),
    )
    return record, ParseSummary(sample_id=sample_id, path=path, by_kind=kinds)


def parse_log(lines: Iterable[str], sample_id: str, label: str) -> CallCountRecord:
    record, _ = parse_log_detailed(lines, sample_id, label)
    return record


def ingest_corpus(manifest: Iterable[tuple[str, str, str]]) -> IngestResult:
    """Parse every log named by (path, label, sample_id) rows, in order."""
    records: list[CallCountRecord] = []
    summaries: list[ParseSummary] = []
    seen: set[str] = set()
    for path, label, sample_id in manifest:
        if sample_id in seen:
            raise ConfigError(f"duplicate sample_id: {sample_id!r}")
        seen.add(sample_id)
        try:
            # Trace logs are byte streams of uncertain encoding; decode lossily.
            text = Path(path).read_text(encoding="utf-8", errors="replace")
        except OSError as exc:
            raise ConfigError(f"cannot read trace log {path!r}: {exc}") from exc
        record, summary = parse_log_detailed(
            text.splitlines(), sample_id, label, path=str(path)
        )
        records.append(record)
        summaries.append(summary)
    return IngestResult(records=records, summaries=summaries)


def read_manifest(path: str | Path) -> list[tuple[str, str, str]]:
    """Read a manifest CSV with header path,label,sample_id.

    Relative log paths are resolved against the manifest's directory.
    """
    manifest_path = Path(path)
    try:
        text = manifest_path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read manifest {str(path)!r}: {exc}") from exc
    reader = csv.DictReader(text.splitlines())
    expected = ["path", "label", "sample_id"]
    if reader.fieldnames != expected:
        raise ConfigError(
            f"manifest header must be {','.join(expected)}, got "
            f"{','.join(reader.fieldnames or ['<empty>'])}"
        )
    rows: list[tuple[str, str, str]] = []
    for row in reader:
        label = row["label"]
        if label not in LABELS:
            raise ConfigError(
                f"manifest label for {row['sample_id']!r} must be M or B, got {label!r}"
            )
        log_path = Path(row["path"])
        if not log_path.is_absolute():
            log_path = manifest_path.parent / log_path
        rows.append((str(log_path), label, row["sample_id"]))
    return rows


def write_records_jsonl(records: Iterable[CallCountRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            obj = {
                "sample_id": r.sample_id,
                "label": r.label,
                "counts": r.counts,
                "total": r.total_calls,
            }
            fh.write(json.dumps(obj, sort_keys=True) + "\n")


def read_records_jsonl(path: str | Path) -> list[CallCountRecord]:
    records: list[CallCountRecord] = []
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read record file {str(path)!r}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            record = CallCountRecord(
                sample_id=obj["sample_id"],
                label=obj["label"],
                counts={str(k): int(v) for k, v in obj["counts"].items()},
                total_calls=int(obj["total"]),
            )
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ConfigError(
                f"bad record on line {lineno} of {str(path)!r}: {exc}"
            ) from exc
        record.validate()
        records.append(record)
    return records
