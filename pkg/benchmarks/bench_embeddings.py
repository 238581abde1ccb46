#!/usr/bin/env python3
"""Benchmark the embedding enumeration kernels against each other.

Generates synthetic corpora at a few sizes, enumerates embeddings of a
fixed pattern deck over every trace with both the compiled and the pure
Python backend, checks the outputs are identical, and reports wall times.

Run from the repository root:

    python3 benchmarks/bench_embeddings.py
    python3 benchmarks/bench_embeddings.py --traces 2000 --repeat 5
"""
from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from tracemotif._kernels import BACKEND, match_pattern
from tracemotif.ingest import PlantedPattern, SyntheticSpec, generate_synthetic
from tracemotif.patterns import canonicalize

CAP = 50_000


def pattern_deck(table):
    """Edges, chains, and a diamond over a deliberately small alphabet.

    Few distinct labels means many candidate points per pattern vertex,
    which is exactly the regime the compiled kernel is for.
    """
    def lid(i):
        return table.id_of(f"L{i:02d}")

    decks = [
        ((lid(0), lid(1)), ((0, 1),)),
        ((lid(0), lid(1), lid(2)), ((0, 1), (1, 2))),
        ((lid(0), lid(1), lid(0), lid(1)), ((0, 1), (1, 2), (2, 3))),
        ((lid(1), lid(2), lid(3), lid(0)), ((0, 1), (0, 2), (1, 3), (2, 3))),
    ]
    return [canonicalize(labels, edges) for labels, edges in decks]


def build_corpus(num_traces: int, seed: int):
    chain3 = canonicalize((0, 1, 2), ((0, 1), (1, 2)))
    spec = SyntheticSpec(
        seed=seed,
        num_traces=num_traces,
        label_alphabet_size=4,
        background_edges_per_trace=(15, 40),
        planted_patterns=(PlantedPattern(chain3, 0.8, copies_per_trace=2),),
    )
    return generate_synthetic(spec)


def run_backend(backend: str, patterns, arrays_list):
    total_rows = 0
    t0 = time.perf_counter()
    for arrays in arrays_list:
        for p in patterns:
            ids, _ = match_pattern(p, arrays, CAP, backend=backend)
            total_rows += ids.shape[0]
    return time.perf_counter() - t0, total_rows


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--traces", type=int, default=800)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    if BACKEND != "cython":
        print("compiled kernel not available; timing pure Python only")
        backends = ["python"]
    else:
        backends = ["python", "cython"]

    store = build_corpus(args.traces, args.seed)
    patterns = pattern_deck(store.label_table)
    arrays_list = [t.match_arrays for t in store.traces]
    n_pairs = len(patterns) * len(arrays_list)
    print(f"{args.traces} traces x {len(patterns)} patterns "
          f"({n_pairs} match calls per pass, cap {CAP})")

    if len(backends) == 2:
        for arrays in arrays_list[:50]:
            for p in patterns:
                a, ta = match_pattern(p, arrays, CAP, backend="python")
                b, tb = match_pattern(p, arrays, CAP, backend="cython")
                assert ta == tb and np.array_equal(a, b), "backend mismatch"
        print("spot check: both backends byte-identical on 50 traces")

    results = {}
    for backend in backends:
        times = []
        rows = 0
        for _ in range(args.repeat):
            elapsed, rows = run_backend(backend, patterns, arrays_list)
            times.append(elapsed)
        best = min(times)
        results[backend] = best
        print(f"  {backend:>7}: best {best*1e3:8.1f} ms  "
              f"median {statistics.median(times)*1e3:8.1f} ms  "
              f"({rows} embeddings)")

    if len(results) == 2:
        print(f"speedup: {results['python'] / results['cython']:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
