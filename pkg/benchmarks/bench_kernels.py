#!/usr/bin/env python3
"""Benchmark the compiled Newton kernel against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [restarts]
"""

import sys
import time

import numpy as np

from mubforge.catalogue import bjorck_c6, dita_slice, fourier, tao_s6
from mubforge.kernels import available_backends
from mubforge.search import SearchConfig, _dedup


def bench(name, H, restarts, seed=123):
    C = H.conj().T
    d = H.shape[0]
    rng = np.random.Generator(np.random.Philox(key=seed))
    starts = rng.uniform(0, 2 * np.pi, size=(restarts, d - 1))
    rows = []
    for backend, fn in available_backends().items():
        t0 = time.time()
        ph, ok = fn(C, starts, 200, 1e-12)
        elapsed = time.time() - t0
        V = np.concatenate([np.ones((int(ok.sum()), 1)), np.exp(1j * ph[ok])], axis=1) / np.sqrt(d)
        vecs, _ = _dedup(V, np.flatnonzero(ok), SearchConfig().dedup_tol)
        rows.append((backend, elapsed, int(ok.sum()), len(vecs)))
    return rows


def main():
    restarts = int(sys.argv[1]) if len(sys.argv) > 1 else 20_000
    backs = available_backends()
    print(f"backends available: {', '.join(backs)}   restarts per pair: {restarts}")
    print(f"{'pair':10s} {'backend':8s} {'seconds':>9s} {'restarts/s':>11s} {'converged':>10s} {'distinct':>9s}")
    cases = [
        ("F6", fourier(6).matrix),
        ("S6", tao_s6().matrix),
        ("C6", bjorck_c6().matrix),
        ("D6(0)", dita_slice(0.0).matrix),
    ]
    speed = {}
    for name, H in cases:
        for backend, elapsed, conv, distinct in bench(name, H, restarts):
            speed.setdefault(backend, []).append(elapsed)
            print(f"{name:10s} {backend:8s} {elapsed:9.2f} {restarts/elapsed:11.0f} {conv:10d} {distinct:9d}")
    if len(speed) == 2:
        ratio = sum(speed["python"]) / sum(speed["cython"])
        print(f"\ncompiled kernel speedup over numpy fallback: {ratio:.1f}x")


if __name__ == "__main__":
    main()
