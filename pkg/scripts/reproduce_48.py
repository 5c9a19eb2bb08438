#!/usr/bin/env python3
"""Seed-pinned reproduction of the {I, F6} enumeration: 48 MU vectors that
group into 16 orthonormal bases (hence 16 MU triples, none extendible).

Writes reproduce_48.json; reruns produce identical JSON.
"""

import sys

from mubforge import io
from mubforge.catalogue import fourier
from mubforge.search import SearchConfig, group_into_bases, mu_vectors_to_pair

OUT = "reproduce_48.json"


def main():
    cfg = SearchConfig(seed=424242, restarts=200_000)
    sol = mu_vectors_to_pair(fourier(6).matrix, cfg)
    bases = group_into_bases(sol)
    doc = io.document_for_solutions(
        sol, {"seed": cfg.seed, "restarts": cfg.restarts, "bases": len(bases)}
    )
    io.save(doc, OUT)
    print(f"{sol.count} vectors, {len(bases)} bases -> {OUT}")
    return 0 if sol.count == 48 and len(bases) == 16 else 1


if __name__ == "__main__":
    sys.exit(main())
