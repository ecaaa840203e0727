"""Parse a raw strace capture into per-sample call counts.

Every line is classified into exactly one kind; only call and unfinished
lines add to the counts, so interrupted calls are never double counted
when their resumed half shows up later.
"""

from callselect import parse_line, parse_log_detailed

CAPTURE = """\
execve("/usr/bin/demo", ["demo"], 0x7ffc) = 0
open("/etc/hosts", O_RDONLY) = 3
read(3, "127.0.0.1 localhost", 4096) = 19
read(3, "", 4096) = 0
close(3) = 0
socket(AF_INET, SOCK_DGRAM, 0) = 4
sendto(4, "ping", 4, 0, NULL, 0 <unfinished ...>
--- SIGALRM {si_signo=SIGALRM} ---
<... sendto resumed> ) = 4
1234  getpid() = 1234
+++ exited with 0 +++
"""


def main() -> None:
    lines = CAPTURE.splitlines()

    print("line kinds:")
    for line in lines:
        t = parse_line(line)
        name = f" ({t.call_name})" if t.call_name else ""
        print(f"  {t.kind:<10}{name:<12} {line[:52]}")

    record, summary = parse_log_detailed(lines, sample_id="demo-01", label="B")
    print("\ncounted occurrences (resumed lines excluded):")
    for call in sorted(record.counts):
        print(f"  {call:<10} {record.counts[call]}")
    print(f"total calls: {record.total_calls}")
    print(f"kind tally:  {summary.by_kind}")


if __name__ == "__main__":
    main()
