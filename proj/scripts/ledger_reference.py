#!/usr/bin/env python3
"""Independent replay of the match/mismatch accounting over diff records.

Reads a diff_records.jsonl file, re-derives every verdict from the stored
(reference, service) outcome pair, and rebuilds the per-category ledger: a
rule mismatches in category c when at least one of its executions
mismatches with service outcome c, and matches otherwise. Used to produce
the checked-in golden ledger the C++ accounting is held to.

Usage: python3 scripts/ledger_reference.py <diff_records.jsonl> > golden.json
"""

import json
import sys

CATEGORIES = ["Pass", "Fail", "NotApplied", "Warning", "Http500", "EmptyResponse"]


def replay(path):
    executed = set()
    mismatched = {c: set() for c in CATEGORIES}
    with open(path) as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            key = f"{rec['ruleId']}/{rec['version']}"
            executed.add(key)

            ref = rec["ref"]
            service = rec["service"]
            match = ref in ("Pass", "Fail", "NotApplied") and ref == service
            if match != rec["match"]:
                raise SystemExit(f"verdict disagreement for {key}: {rec}")
            if not match:
                mismatched[service].add(key)

    out = {"executedRules": sorted(executed), "categories": {}}
    for category in CATEGORIES:
        misses = sorted(mismatched[category])
        out["categories"][category] = {
            "matchCount": len(executed) - len(misses),
            "mismatchCount": len(misses),
            "mismatchedRules": misses,
        }
    return out


def main():
    json.dump(replay(sys.argv[1]), sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
