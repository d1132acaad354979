#!/usr/bin/env python3
"""Independent reference for the Dunn post-hoc golden fixture.

Computes Dunn's pairwise z statistics on shared mid-ranks with tie
correction, two-sided normal p-values, and Benjamini-Yekutieli adjusted
p-values via scipy. The output is checked in as tests/data/dunn_golden.json
and the C++ implementation is held to it.

Usage: python3 scripts/dunn_reference.py > tests/data/dunn_golden.json
"""

import itertools
import json
import sys

import numpy as np
from scipy import stats

GROUPS = {
    "g1": [1.0, 2.0, 2.0, 3.5, 4.0, 5.0],
    "g2": [2.0, 3.5, 3.5, 5.0, 6.0, 7.5],
    "g3": [5.0, 6.5, 7.5, 8.0, 9.0, 9.0],
}


def dunn_pairs(groups):
    labels = list(groups)
    pooled = np.concatenate([groups[label] for label in labels])
    ranks = stats.rankdata(pooled)
    n_total = len(pooled)

    mean_ranks = {}
    start = 0
    for label in labels:
        size = len(groups[label])
        mean_ranks[label] = ranks[start : start + size].mean()
        start += size

    _, tie_counts = np.unique(pooled, return_counts=True)
    tie_sum = float(np.sum(tie_counts**3 - tie_counts))
    base_variance = n_total * (n_total + 1) / 12.0 - tie_sum / (12.0 * (n_total - 1))

    rows = []
    for a, b in itertools.combinations(labels, 2):
        variance = base_variance * (1.0 / len(groups[a]) + 1.0 / len(groups[b]))
        z = (mean_ranks[a] - mean_ranks[b]) / np.sqrt(variance)
        p = min(1.0, 2.0 * stats.norm.sf(abs(z)))
        rows.append({"group1": a, "group2": b, "z": z, "p_raw": p})

    adjusted = stats.false_discovery_control(
        [row["p_raw"] for row in rows], method="by"
    )
    for row, adj in zip(rows, adjusted):
        row["p_adjusted"] = float(min(1.0, adj))
    return rows


def main():
    rows = dunn_pairs(GROUPS)
    h, p = stats.kruskal(*GROUPS.values())
    out = {
        "groups": GROUPS,
        "kruskal": {"h": float(h), "p": float(p)},
        "pairs": rows,
    }
    json.dump(out, sys.stdout, indent=2)
    sys.stdout.write("\n")


if __name__ == "__main__":
    main()
