"""Performance annotation of mined patterns.

Each mined pattern becomes a Motif carrying an execution-time distribution
(max minus min mapped timestamp per embedding), per-edge latency
distributions, and, where defined, per-embedding critical paths.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import EmptySample
from .mining import Embedding, MinedPattern, MiningConfig, SupportStats
from .model import TraceStore
from .patterns import Pattern

PERCENTILES = (50, 95, 99)


def nearest_rank(sorted_samples: Sequence[int], q: float) -> int:
    """Nearest-rank percentile: the ceil(q/100 * N)-th smallest sample."""
    n = len(sorted_samples)
    if n == 0:
        raise EmptySample("percentile of empty sample set")
    rank = math.ceil(q / 100.0 * n)
    return sorted_samples[max(rank, 1) - 1]


@dataclass(frozen=True)
class Summary:
    count: int
    min: int
    max: int
    mean: float
    p50: int
    p95: int
    p99: int


@dataclass(frozen=True)
class Distribution:
    """Sample multiset with a nearest-rank summary.

    Samples are kept sorted; they may be absent on instances rebuilt from
    a summary-only serialization. truncated marks statistics computed from
    an embedding-cap-limited prefix.
    """

    summary: Summary
    samples: tuple[int, ...] | None
    truncated: bool = False

    @classmethod
    def from_samples(cls, values, truncated: bool = False) -> "Distribution":
        samples = tuple(sorted(int(v) for v in values))
        if not samples:
            raise EmptySample("distribution needs at least one sample")
        summary = Summary(
            count=len(samples),
            min=samples[0],
            max=samples[-1],
            mean=sum(samples) / len(samples),
            p50=nearest_rank(samples, 50),
            p95=nearest_rank(samples, 95),
            p99=nearest_rank(samples, 99),
        )
        return cls(summary=summary, samples=samples, truncated=truncated)

    def require_samples(self) -> tuple[int, ...]:
        if self.samples is None:
            raise EmptySample("raw samples were not serialized for this distribution")
        return self.samples


@dataclass(frozen=True)
class Motif:
    """A mined pattern with its performance characteristics attached."""

    pattern: Pattern
    support: SupportStats
    exec_time_dist: Distribution
    edge_lat_dists: tuple[Distribution, ...]
    complete_fork_join: bool
    critical_paths: tuple[tuple[int, ...] | None, ...] | None
    embedding_counts: tuple[tuple[str, int], ...]
    truncated: bool = False

    @property
    def code(self):
        return self.pattern.code

    @property
    def code_str(self) -> str:
        return self.pattern.code_str

    @property
    def occurrence_count(self) -> int:
        return sum(c for _, c in self.embedding_counts)


@dataclass(frozen=True)
class MotifSet:
    """All motifs of one mining run plus the config that produced them."""

    config: MiningConfig
    trace_count: int
    motifs: tuple[Motif, ...]

    @cached_property
    def by_code(self) -> dict[str, Motif]:
        return {m.code_str: m for m in self.motifs}


def execution_time(e: Embedding) -> int:
    """Max minus min mapped timestamp."""
    ts = [e.trace.point_by_id[pid].ts_us for pid in e.vertex_map]
    return max(ts) - min(ts)


def structurally_complete(p: Pattern) -> bool:
    """True when every fork reconverges inside the pattern.

    Requires a unique source vertex and, for each vertex with out-degree
    >= 2, some pattern vertex reachable from all of its successors; only
    then is the backward critical-path walk guaranteed to span the whole
    occurrence.
    """
    n = p.num_vertices
    succ: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for u, v in p.edges:
        succ[u].append(v)
        indeg[v] += 1
    if sum(1 for v in range(n) if indeg[v] == 0) != 1:
        return False
    reach: list[frozenset[int]] = [frozenset()] * n
    for v in _reverse_topological(n, succ, indeg):
        acc = {v}
        for w in succ[v]:
            acc |= reach[w]
        reach[v] = frozenset(acc)
    for v in range(n):
        if len(succ[v]) >= 2:
            common = reach[succ[v][0]]
            for w in succ[v][1:]:
                common = common & reach[w]
            if not common:
                return False
    return True


def _reverse_topological(n: int, succ: list[list[int]], indeg: list[int]) -> list[int]:
    remaining = list(indeg)
    ready = [v for v in range(n) if remaining[v] == 0]
    order: list[int] = []
    while ready:
        v = ready.pop()
        order.append(v)
        for w in succ[v]:
            remaining[w] -= 1
            if remaining[w] == 0:
                ready.append(w)
    order.reverse()
    return order


def _flagged_fragment(p: Pattern, trace, vertex_map) -> bool:
    # A chain whose mapped points carry the concurrent-branch flag is a
    # fork/join fragment even though it looks like a path.
    if not p.is_chain:
        return False
    pts = trace.point_by_id
    return any(pts[int(pid)].concurrent_branch for pid in vertex_map)


def _walk_critical(p: Pattern, trace, vertex_map) -> tuple[int, ...]:
    pts = trace.point_by_id
    mapped = [int(pid) for pid in vertex_map]
    preds: dict[int, list[int]] = {pid: [] for pid in mapped}
    for u, v in p.edges:
        preds[mapped[v]].append(mapped[u])
    max_ts = max(pts[pid].ts_us for pid in mapped)
    cur = min(pid for pid in mapped if pts[pid].ts_us == max_ts)
    path = [cur]
    while preds[cur]:
        best_ts = max(pts[pid].ts_us for pid in preds[cur])
        cur = min(pid for pid in preds[cur] if pts[pid].ts_us == best_ts)
        path.append(cur)
    path.reverse()
    return tuple(path)


def critical_path(e: Embedding) -> tuple[int, ...] | None:
    """Backward latest-predecessor walk; None when the occurrence is a fragment."""
    if not structurally_complete(e.pattern):
        return None
    if _flagged_fragment(e.pattern, e.trace, e.vertex_map):
        return None
    return _walk_critical(e.pattern, e.trace, e.vertex_map)


def annotate(mined: MinedPattern, store: TraceStore) -> Motif:
    """Pure enrichment of one miner output row into a Motif."""
    p = mined.pattern
    exec_samples: list[int] = []
    edge_samples: list[list[int]] = [[] for _ in p.edges]
    paths: list[tuple[int, ...] | None] = []
    structural = structurally_complete(p)
    all_defined = structural
    for te in mined.embeddings:
        trace = store.by_id[te.trace_id]
        arrays = trace.match_arrays
        idx = np.searchsorted(arrays.ids, te.vertex_maps)
        ts = arrays.ts[idx]
        exec_samples.extend((ts.max(axis=1) - ts.min(axis=1)).tolist())
        for i, (u, v) in enumerate(p.edges):
            edge_samples[i].extend((ts[:, v] - ts[:, u]).tolist())
        for row in te.vertex_maps:
            if structural and not _flagged_fragment(p, trace, row):
                paths.append(_walk_critical(p, trace, row))
            else:
                paths.append(None)
                all_defined = False
    truncated = mined.truncated
    return Motif(
        pattern=p,
        support=mined.support,
        exec_time_dist=Distribution.from_samples(exec_samples, truncated),
        edge_lat_dists=tuple(
            Distribution.from_samples(vals, truncated) for vals in edge_samples
        ),
        complete_fork_join=all_defined,
        critical_paths=tuple(paths),
        embedding_counts=tuple((te.trace_id, te.count) for te in mined.embeddings),
        truncated=truncated,
    )


def annotate_all(mined: Sequence[MinedPattern], store: TraceStore) -> list[Motif]:
    return [annotate(m, store) for m in mined]
