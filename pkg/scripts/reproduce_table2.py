#!/usr/bin/env python3
"""Seed-pinned reproduction of the {5,x,y,z}_6 constellation found/not-found
pattern (500 restarts per cell; exact success rates are not reproducible at
this scale, only the pattern).

Writes reproduce_table2.json; reruns produce identical JSON.
"""

import sys

from mubforge import io
from mubforge.search import ConstellationSpec, SearchConfig, constellation_search

OUT = "reproduce_table2.json"

CELLS = [
    (1, 1, 1), (2, 1, 1), (2, 2, 1), (2, 2, 2), (3, 1, 1), (3, 2, 1), (3, 2, 2),
    (3, 3, 1), (3, 3, 2), (3, 3, 3), (4, 1, 1), (4, 2, 1), (4, 2, 2), (4, 3, 1),
    (4, 3, 2), (4, 3, 3), (4, 4, 1), (4, 4, 2), (4, 4, 3), (4, 4, 4), (5, 1, 1),
    (5, 2, 1), (5, 2, 2), (5, 3, 1), (5, 3, 2), (5, 3, 3), (5, 4, 1), (5, 4, 2),
    (5, 4, 3), (5, 4, 4), (5, 5, 1), (5, 5, 2), (5, 5, 3), (5, 5, 4), (5, 5, 5),
]


def main():
    rows = {}
    for (x, y, z) in CELLS:
        spec = ConstellationSpec(6, (5, x, y, z))
        cfg = SearchConfig(seed=1000 + 100 * x + 10 * y + z, restarts=500)
        res = constellation_search(spec, cfg)
        key = f"5,{x},{y},{z}"
        rows[key] = {
            "successes": res.successes,
            "attempts": res.attempts,
            "found": res.found,
            "best_residual": res.best_residual,
        }
        print(f"{{{key}}}_6: {res.successes}/500 best F {res.best_residual:.2e}")
    io.save(io.document_for_report(6, rows, {"restarts_per_cell": 500}), OUT)
    print(f"-> {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
