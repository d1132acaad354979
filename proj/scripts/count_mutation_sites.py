#!/usr/bin/env python3
"""Independent mutation-site counter over rule source text.

Counts applicable sites per operator by tokenizing the rule text directly,
without touching the C++ AST. The output is checked in as
tests/data/mutation_counts_golden.json; mutate_all is held to it.

Caveats, valid for the shipped corpus: the SR count assumes no implication
has syntactically identical operands, and SSI only counts substring calls
with two distinct indices (swapping equal indices would not change the
rule).

Usage: python3 scripts/count_mutation_sites.py data/corpus/rules.json \
           > tests/data/mutation_counts_golden.json
"""

import json
import re
import sys

AD_VARIANTS = 6

DATE_RE = re.compile(r"date\('[^']*'\)")
STRING_RE = re.compile(r"'(?:\\.|[^'\\])*'")
SUBSTRING_RE = re.compile(r"substring\(\s*\w+\s*,\s*(\d+)\s*,\s*(\d+)\s*\)")
WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def count_sites(expression):
    counts = {}
    counts["AD"] = len(DATE_RE.findall(expression))

    ssi = 0
    for i, j in SUBSTRING_RE.findall(expression):
        if i != j:
            ssi += 1
    counts["SSI"] = ssi

    # strip string literals so quoted text never contributes tokens
    stripped = STRING_RE.sub("''", expression)

    words = WORD_RE.findall(stripped)
    counts["CO"] = words.count("and") + words.count("or")
    counts["RI"] = words.count("in") + words.count("notIn")
    counts["RSE"] = words.count("startswith") + words.count("endswith")
    counts["SR"] = words.count("implies")

    # order matters: two-character comparators first
    ops = re.findall(r"!=|<=|>=|=|<|>", stripped)
    counts["NI"] = ops.count("=") + ops.count("!=")
    counts["ACO"] = ops.count("<") + ops.count(">") + ops.count("<=") + ops.count(">=")
    return counts


def main():
    rules = json.load(open(sys.argv[1]))
    per_rule = {}
    per_operator = {}
    total_mutants = 0
    for rule in rules:
        key = f"{rule['id']}/{rule['version']}"
        counts = count_sites(rule["expression"])
        per_rule[key] = counts
        for op, n in counts.items():
            per_operator[op] = per_operator.get(op, 0) + n
            total_mutants += n * (AD_VARIANTS if op == "AD" else 1)

    json.dump(
        {
            "totalMutants": total_mutants,
            "perOperator": dict(sorted(per_operator.items())),
            "perRule": per_rule,
        },
        sys.stdout,
        indent=2,
        sort_keys=False,
    )
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
