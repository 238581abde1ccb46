"""Exhaustive reference miner for small traces.

Deliberately independent route from the production miner: connected edge
subsets are enumerated per trace, bucketed by exhaustive label-preserving
permutation isomorphism, and embeddings are re-enumerated naively against
an edge set. Used as the ground-truth oracle in tests.
"""
from __future__ import annotations

from itertools import permutations, product

import numpy as np

from .errors import TraceTooLarge
from .mining import MinedPattern, MiningConfig, SupportStats, TraceEmbeddings
from .model import Trace, TraceStore
from .patterns import Pattern, canonicalize

MAX_ORACLE_POINTS = 12

RawGraph = tuple[tuple[int, ...], tuple[tuple[int, int], ...]]


def _connected_edge_subsets(t: Trace, max_edges: int) -> set[frozenset[int]]:
    """All connected subsets of 1..max_edges edge indices."""
    edges = [(e.src, e.dst) for e in t.edges]
    m = len(edges)
    adjacent: list[set[int]] = [set() for _ in range(m)]
    for a in range(m):
        for b in range(a + 1, m):
            if set(edges[a]) & set(edges[b]):
                adjacent[a].add(b)
                adjacent[b].add(a)
    frontier = {frozenset((i,)) for i in range(m)}
    found = set(frontier)
    for _ in range(max_edges - 1):
        grown = set()
        for subset in frontier:
            reachable = set()
            for i in subset:
                reachable |= adjacent[i]
            for j in reachable - subset:
                ext = subset | {j}
                if ext not in found:
                    found.add(ext)
                    grown.add(ext)
        frontier = grown
    return found


def _raw_from_subset(t: Trace, subset: frozenset[int]) -> RawGraph:
    edges = [(t.edges[i].src, t.edges[i].dst) for i in sorted(subset)]
    pids = sorted({v for e in edges for v in e})
    index = {pid: i for i, pid in enumerate(pids)}
    labels = tuple(t.point_by_id[pid].label_id for pid in pids)
    return labels, tuple(sorted((index[u], index[v]) for u, v in edges))


def perm_canonical(labels: tuple[int, ...], edges: tuple[tuple[int, int], ...]) -> RawGraph:
    """Minimum relabeling over all label-preserving vertex permutations."""
    n = len(labels)
    by_label = sorted(range(n), key=lambda v: (labels[v], v))
    groups: list[list[int]] = []
    for v in by_label:
        if groups and labels[groups[-1][0]] == labels[v]:
            groups[-1].append(v)
        else:
            groups.append([v])
    best: RawGraph | None = None
    for arrangement in product(*(permutations(g) for g in groups)):
        order = [v for group in arrangement for v in group]
        pos = {v: i for i, v in enumerate(order)}
        key = (
            tuple(labels[v] for v in order),
            tuple(sorted((pos[u], pos[v]) for u, v in edges)),
        )
        if best is None or key < best:
            best = key
    assert best is not None
    return best


def _naive_embeddings(p: Pattern, t: Trace) -> np.ndarray:
    """Injective label-respecting assignments checked against the edge set."""
    n = p.num_vertices
    edge_set = {(e.src, e.dst) for e in t.edges}
    candidates = [
        sorted(pt.id for pt in t.points if pt.label_id == p.labels[v]) for v in range(n)
    ]
    back = [
        [(u, v) for u, v in p.edges if max(u, v) == k] for k in range(n)
    ]
    rows: list[tuple[int, ...]] = []
    assign: list[int] = []

    def rec(k: int) -> None:
        if k == n:
            rows.append(tuple(assign))
            return
        for pid in candidates[k]:
            if pid in assign:
                continue
            ok = True
            for u, v in back[k]:
                mu = pid if u == k else assign[u]
                mv = pid if v == k else assign[v]
                if (mu, mv) not in edge_set:
                    ok = False
                    break
            if not ok:
                continue
            assign.append(pid)
            rec(k + 1)
            assign.pop()

    rec(0)
    rows.sort()
    return np.array(rows, dtype=np.int64).reshape(len(rows), n)


def survey_store(store: TraceStore, max_edges: int) -> dict[Pattern, dict[int, np.ndarray]]:
    """Every connected pattern occurring in the store, with all embeddings.

    Keys are canonical patterns; values map trace position -> embedding
    rows. Bucketing is done by permutation isomorphism, then each bucket is
    converted to the canonical form once; a collision between distinct
    permutation buckets would indicate a broken canonical code and raises.
    """
    for t in store.traces:
        if len(t.points) > MAX_ORACLE_POINTS:
            raise TraceTooLarge(
                f"trace {t.trace_id!r} has {len(t.points)} points; oracle limit is {MAX_ORACLE_POINTS}"
            )
    pattern_of: dict[RawGraph, Pattern] = {}
    key_of: dict[Pattern, RawGraph] = {}
    occurrences: dict[Pattern, dict[int, np.ndarray]] = {}
    for ti, t in enumerate(store.traces):
        trace_keys: set[RawGraph] = set()
        raw_by_key: dict[RawGraph, RawGraph] = {}
        for subset in _connected_edge_subsets(t, max_edges):
            labels, edges = _raw_from_subset(t, subset)
            key = perm_canonical(labels, edges)
            trace_keys.add(key)
            raw_by_key.setdefault(key, (labels, edges))
        for key in trace_keys:
            p = pattern_of.get(key)
            if p is None:
                labels, edges = raw_by_key[key]
                p = canonicalize(labels, edges)
                prior = key_of.get(p)
                assert prior is None or prior == key, "canonical code merged non-isomorphic patterns"
                pattern_of[key] = p
                key_of[p] = key
                occurrences[p] = {}
            occurrences[p][ti] = _naive_embeddings(p, t)
    return occurrences


def filter_survey(
    survey: dict[Pattern, dict[int, np.ndarray]], store: TraceStore, cfg: MiningConfig
) -> list[MinedPattern]:
    """Apply the support predicate to a precomputed survey."""
    results = []
    for p in sorted(survey, key=lambda q: q.code):
        if p.num_edges > cfg.max_edges:
            continue
        per_trace = []
        max_within = 0
        for ti, t in enumerate(store.traces):
            maps = survey[p].get(ti)
            if maps is None or maps.shape[0] == 0:
                continue
            truncated = maps.shape[0] > cfg.embedding_cap_per_trace
            if truncated:
                maps = maps[:cfg.embedding_cap_per_trace]
            per_trace.append(TraceEmbeddings(t.trace_id, maps, truncated))
            within = min(len(set(maps[:, c].tolist())) for c in range(maps.shape[1]))
            if within > max_within:
                max_within = within
        containing = frozenset(te.trace_id for te in per_trace)
        if not containing:
            continue
        stats = SupportStats(
            containing_traces=containing,
            transaction_support=len(containing) / store.k,
            max_within_count=max_within,
        )
        passes = (
            cfg.sigma_across is not None and stats.transaction_support >= cfg.sigma_across
        ) or (cfg.sigma_within is not None and stats.max_within_count >= cfg.sigma_within)
        if passes:
            results.append(MinedPattern(p, stats, tuple(per_trace)))
    return results


def brute_force_mine(store: TraceStore, cfg: MiningConfig) -> list[MinedPattern]:
    """Reference semantics for mine_patterns; traces limited to 12 points."""
    return filter_survey(survey_store(store, cfg.max_edges), store, cfg)
