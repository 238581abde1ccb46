"""Frequent subgraph mining over trace stores with a dual support measure.

A pattern is reported when its transaction support (fraction of traces
containing it) reaches sigma_across, or when its within-trace image count
reaches sigma_within in any single trace. Both measures are anti-monotone
under sub-patterns, so their disjunction admits downward-closure pruning:
candidates are grown one edge at a time from surviving patterns only.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from ._kernels import match_pattern
from .errors import EmptyStore, InvalidConfig
from .model import Trace, TraceStore
from .patterns import Pattern, canonicalize

DEFAULT_MAX_EDGES = 10
DEFAULT_EMBEDDING_CAP = 10_000


@dataclass(frozen=True)
class MiningConfig:
    """Thresholds and bounds for one mining run.

    At least one of sigma_across / sigma_within must be enabled. The
    embedding cap bounds per-trace work; when hit, within-trace statistics
    are computed from the enumerated prefix and the truncation is recorded
    on the results.
    """

    sigma_across: float | None = None
    sigma_within: int | None = None
    max_edges: int = DEFAULT_MAX_EDGES
    embedding_cap_per_trace: int = DEFAULT_EMBEDDING_CAP

    def __post_init__(self) -> None:
        if self.sigma_across is None and self.sigma_within is None:
            raise InvalidConfig("at least one of sigma_across / sigma_within must be set")
        if self.sigma_across is not None and not 0.0 < self.sigma_across <= 1.0:
            raise InvalidConfig(f"sigma_across must be in (0, 1], got {self.sigma_across}")
        if self.sigma_within is not None and self.sigma_within < 2:
            raise InvalidConfig(f"sigma_within must be >= 2, got {self.sigma_within}")
        if self.max_edges < 1:
            raise InvalidConfig(f"max_edges must be >= 1, got {self.max_edges}")
        if self.embedding_cap_per_trace < 1:
            raise InvalidConfig(
                f"embedding_cap_per_trace must be >= 1, got {self.embedding_cap_per_trace}"
            )


@dataclass(frozen=True)
class Embedding:
    """One witness that a pattern occurs in a trace.

    vertex_map[i] is the trace point id that pattern vertex i maps to.
    """

    pattern: Pattern
    trace: Trace
    vertex_map: tuple[int, ...]

    @property
    def trace_id(self) -> str:
        return self.trace.trace_id


@dataclass(frozen=True, eq=False)
class TraceEmbeddings:
    """All embeddings of one pattern in one trace, lexicographically sorted."""

    trace_id: str
    vertex_maps: np.ndarray  # (count, num_vertices) int64 point ids
    truncated: bool = False

    @property
    def count(self) -> int:
        return self.vertex_maps.shape[0]

    def as_tuples(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in row) for row in self.vertex_maps]


@dataclass(frozen=True)
class SupportStats:
    containing_traces: frozenset[str]
    transaction_support: float
    max_within_count: int


@dataclass(frozen=True, eq=False)
class MinedPattern:
    """Miner output row: pattern, support, and per-trace embeddings."""

    pattern: Pattern
    support: SupportStats
    embeddings: tuple[TraceEmbeddings, ...]  # containing traces, store order

    @property
    def truncated(self) -> bool:
        return any(te.truncated for te in self.embeddings)

    def iter_embeddings(self, store: TraceStore) -> Iterator[Embedding]:
        for te in self.embeddings:
            trace = store.by_id[te.trace_id]
            for row in te.vertex_maps:
                yield Embedding(self.pattern, trace, tuple(int(x) for x in row))


def enumerate_embeddings(
    p: Pattern, t: Trace, cap: int = DEFAULT_EMBEDDING_CAP
) -> list[Embedding]:
    """All embeddings of p in t (up to cap), sorted by mapped id tuple."""
    maps, _ = match_pattern(p, t.match_arrays, cap)
    return [Embedding(p, t, tuple(int(x) for x in row)) for row in maps]


def _mni(maps: np.ndarray) -> int:
    """Minimum over pattern vertices of the distinct points mapped to it."""
    if maps.shape[0] == 0:
        return 0
    return min(len(np.unique(maps[:, c])) for c in range(maps.shape[1]))


def _evaluate(p: Pattern, store: TraceStore, cap: int) -> MinedPattern:
    per_trace = []
    max_within = 0
    for t in store.traces:
        maps, truncated = match_pattern(p, t.match_arrays, cap)
        if maps.shape[0] == 0:
            continue
        per_trace.append(TraceEmbeddings(t.trace_id, maps, truncated))
        within = _mni(maps)
        if within > max_within:
            max_within = within
    containing = frozenset(te.trace_id for te in per_trace)
    stats = SupportStats(
        containing_traces=containing,
        transaction_support=len(containing) / store.k,
        max_within_count=max_within,
    )
    return MinedPattern(p, stats, tuple(per_trace))


def _passes(cfg: MiningConfig, stats: SupportStats) -> bool:
    if cfg.sigma_across is not None and stats.transaction_support >= cfg.sigma_across:
        return True
    return cfg.sigma_within is not None and stats.max_within_count >= cfg.sigma_within


def compute_support(
    p: Pattern, store: TraceStore, cap: int = DEFAULT_EMBEDDING_CAP
) -> SupportStats:
    if store.k == 0:
        raise EmptyStore("cannot compute support over an empty store")
    return _evaluate(p, store, cap).support


def _seed_patterns(store: TraceStore) -> set[tuple[tuple[int, ...], tuple[tuple[int, int], ...]]]:
    raws = set()
    for t in store.traces:
        labels = {pt.id: pt.label_id for pt in t.points}
        for e in t.edges:
            raws.add(((labels[e.src], labels[e.dst]), ((0, 1),)))
    return raws


def _extensions_of(
    mined: MinedPattern, store: TraceStore
) -> set[tuple[tuple[int, ...], tuple[tuple[int, int], ...]]]:
    """Raw one-edge extensions realized by at least one embedding."""
    p = mined.pattern
    n = p.num_vertices
    edge_set = set(p.edges)
    raws: set[tuple[tuple[int, ...], tuple[tuple[int, int], ...]]] = set()
    for te in mined.embeddings:
        arrays = store.by_id[te.trace_id].match_arrays
        idx = np.searchsorted(arrays.ids, te.vertex_maps)
        oip, oix = arrays.out_indptr, arrays.out_indices
        iip, iix = arrays.in_indptr, arrays.in_indices
        labels = arrays.labels
        for row in idx:
            where = {int(pt): i for i, pt in enumerate(row)}
            for i in range(n):
                mi = int(row[i])
                for w in oix[oip[mi]:oip[mi + 1]]:
                    j = where.get(int(w))
                    if j is None:
                        raws.add((p.labels + (int(labels[w]),), p.edges + ((i, n),)))
                    elif (i, j) not in edge_set:
                        raws.add((p.labels, p.edges + ((i, j),)))
                for w in iix[iip[mi]:iip[mi + 1]]:
                    j = where.get(int(w))
                    if j is None:
                        raws.add((p.labels + (int(labels[w]),), p.edges + ((n, i),)))
                    elif (j, i) not in edge_set:
                        raws.add((p.labels, p.edges + ((j, i),)))
    return raws


def mine_patterns(store: TraceStore, cfg: MiningConfig) -> list[MinedPattern]:
    """Levelwise pattern growth; returns surviving patterns sorted by code.

    Output includes, per pattern, the support stats and all embeddings per
    containing trace (subject to the embedding cap).
    """
    if store.k == 0:
        raise EmptyStore("cannot mine an empty store")
    cap = cfg.embedding_cap_per_trace
    seen: set[Pattern] = set()
    frontier: list[Pattern] = []
    for labels, edges in _seed_patterns(store):
        cand = canonicalize(labels, edges)
        if cand not in seen:
            seen.add(cand)
            frontier.append(cand)
    frontier.sort(key=lambda q: q.code)

    results: list[MinedPattern] = []
    while frontier:
        survivors: list[MinedPattern] = []
        for p in frontier:
            mined = _evaluate(p, store, cap)
            if _passes(cfg, mined.support):
                survivors.append(mined)
        results.extend(survivors)
        next_frontier: list[Pattern] = []
        if frontier[0].num_edges < cfg.max_edges:
            raws = set()
            for mined in survivors:
                raws |= _extensions_of(mined, store)
            for labels, edges in raws:
                cand = canonicalize(labels, edges)
                if cand not in seen:
                    seen.add(cand)
                    next_frontier.append(cand)
            next_frontier.sort(key=lambda q: q.code)
        frontier = next_frontier
    results.sort(key=lambda m: m.pattern.code)
    return results


def filter_size_multiple(mined: Sequence[MinedPattern], n: int) -> list[MinedPattern]:
    """Keep only patterns whose vertex count is a multiple of n (storage opt-in)."""
    if n < 1:
        raise InvalidConfig(f"size multiple must be >= 1, got {n}")
    return [m for m in mined if m.pattern.num_vertices % n == 0]
