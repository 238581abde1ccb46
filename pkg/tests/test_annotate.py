"""Annotation: percentile rule, distributions on fixtures, critical paths."""
from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tracemotif.annotate import (
    Distribution,
    annotate,
    annotate_all,
    critical_path,
    execution_time,
    nearest_rank,
    structurally_complete,
)
from tracemotif.errors import EmptySample
from tracemotif.mining import Embedding, MiningConfig, mine_patterns
from tracemotif.model import LabelTable, TraceStore, build_trace
from tracemotif.patterns import canonicalize

from .conftest import make_pattern


def _cfg(**kw):
    base = dict(sigma_across=0.6, sigma_within=None, max_edges=4,
                embedding_cap_per_trace=10_000)
    base.update(kw)
    return MiningConfig(**base)


def _motif_by_sketch(store, cfg=None):
    mined = mine_patterns(store, cfg or _cfg())
    motifs = annotate_all(mined, store)
    label_of = store.label_table.label_of
    return {m.pattern.label_sketch(label_of): m for m in motifs}


class TestNearestRank:
    def test_empty_raises(self):
        with pytest.raises(EmptySample):
            nearest_rank([], 50)

    def test_single_sample_is_every_percentile(self):
        assert nearest_rank([7], 50) == 7
        assert nearest_rank([7], 99) == 7

    def test_textbook_values(self):
        xs = [15, 20, 35, 40, 50]
        assert nearest_rank(xs, 50) == 35
        assert nearest_rank(xs, 95) == 50
        assert nearest_rank(xs, 30) == 20

    @given(st.lists(st.integers(0, 10**6), min_size=1, max_size=200))
    def test_percentiles_are_samples_and_monotone(self, xs):
        xs.sort()
        p50 = nearest_rank(xs, 50)
        p95 = nearest_rank(xs, 95)
        p99 = nearest_rank(xs, 99)
        assert {p50, p95, p99} <= set(xs)
        assert xs[0] <= p50 <= p95 <= p99 <= xs[-1]


class TestDistribution:
    def test_from_samples_summarizes(self):
        d = Distribution.from_samples([5, 3, 8], truncated=False)
        s = d.summary
        assert (s.count, s.min, s.max) == (3, 3, 8)
        assert s.mean == pytest.approx((5 + 3 + 8) / 3)
        assert d.samples == (3, 5, 8)

    def test_empty_raises(self):
        with pytest.raises(EmptySample):
            Distribution.from_samples([], truncated=False)


class TestFixtureDistributions:
    def test_single_edge_identity_f1(self, f1_store):
        m = _motif_by_sketch(f1_store)["A->B"]
        assert m.exec_time_dist.samples == (5, 10, 12)
        assert len(m.edge_lat_dists) == 1
        assert m.edge_lat_dists[0].samples == (5, 10, 12)

    def test_chain_exec_times_f1(self, f1_store):
        m = _motif_by_sketch(f1_store)["A->B; B->C"]
        assert m.exec_time_dist.samples == (20, 30)
        # per-edge latencies align with pattern edge order
        by_edge = {
            m.pattern.label_sketch(f1_store.label_table.label_of).split("; ")[i]: d
            for i, d in enumerate(m.edge_lat_dists)
        }
        assert by_edge["A->B"].samples == (10, 12)
        assert by_edge["B->C"].samples == (8, 20)

    def test_three_copies_f2(self, f2_store):
        m = _motif_by_sketch(f2_store, _cfg(sigma_across=1.0))["A->B"]
        assert m.exec_time_dist.samples == (5, 5, 5)
        assert m.exec_time_dist.summary.count == 3
        assert m.occurrence_count == 3
        assert m.embedding_counts == (("T4", 3),)

    def test_fork_join_exec_time_f3(self, f3_store):
        p = make_pattern(
            f3_store.label_table, ["F", "X", "Y", "J"], [(0, 1), (0, 2), (1, 3), (2, 3)]
        )
        from tracemotif.mining import enumerate_embeddings

        (emb,) = enumerate_embeddings(p, f3_store.traces[0])
        assert execution_time(emb) == 20


class TestCriticalPath:
    def test_f3_backward_latest_rule(self, f3_store):
        p = make_pattern(
            f3_store.label_table, ["F", "X", "Y", "J"], [(0, 1), (0, 2), (1, 3), (2, 3)]
        )
        from tracemotif.mining import enumerate_embeddings

        (emb,) = enumerate_embeddings(p, f3_store.traces[0])
        # J's latest predecessor is Y (ts 15 beats X's 10)
        assert critical_path(emb) == (1, 3, 4)

    def test_critical_path_spans_execution_time(self, f3_store):
        p = make_pattern(
            f3_store.label_table, ["F", "X", "Y", "J"], [(0, 1), (0, 2), (1, 3), (2, 3)]
        )
        from tracemotif.mining import enumerate_embeddings

        (emb,) = enumerate_embeddings(p, f3_store.traces[0])
        path = critical_path(emb)
        pts = f3_store.traces[0].point_by_id
        assert pts[path[-1]].ts_us - pts[path[0]].ts_us == execution_time(emb)

    def test_undefined_for_unreconverged_fork(self, table):
        t = build_trace(
            "t",
            [(1, "F", 0), (2, "X", 5), (3, "Y", 6)],
            [(1, 2), (1, 3)],
            table,
        )
        p = make_pattern(table, ["F", "X", "Y"], [(0, 1), (0, 2)])
        from tracemotif.mining import enumerate_embeddings

        (emb,) = enumerate_embeddings(p, t)
        assert not structurally_complete(p)
        assert critical_path(emb) is None

    def test_undefined_for_flagged_chain_fragment(self, table):
        from tracemotif.model import TracePoint

        def pt(pid, label, ts, flag=None):
            return TracePoint(
                id=pid, label=label, label_id=table.intern(label), ts_us=ts,
                concurrent_branch=flag,
            )

        t = build_trace(
            "t",
            [pt(1, "A", 0), pt(2, "B", 5, True), pt(3, "C", 9)],
            [(1, 2), (2, 3)],
            table,
        )
        p = make_pattern(table, ["A", "B", "C"], [(0, 1), (1, 2)])
        from tracemotif.mining import enumerate_embeddings

        (emb,) = enumerate_embeddings(p, t)
        assert critical_path(emb) is None

    def test_defined_for_plain_chain(self, f1_store):
        p = make_pattern(f1_store.label_table, ["A", "B", "C"], [(0, 1), (1, 2)])
        from tracemotif.mining import enumerate_embeddings

        (emb,) = enumerate_embeddings(p, f1_store.by_id["T1"])
        assert critical_path(emb) == (1, 2, 3)

    def test_multi_source_join_is_incomplete(self, table):
        # two sources joining: execution time would not equal the
        # critical path span, so the walk must be undefined
        p = make_pattern(table, ["A", "B", "J"], [(0, 2), (1, 2)])
        assert not structurally_complete(p)


class TestCompleteForkJoinFlag:
    def test_f3_motif_is_complete(self, f3_store):
        motifs = _motif_by_sketch(f3_store, _cfg(sigma_across=1.0))
        (m,) = [x for x in motifs.values() if x.pattern.num_edges == 4]
        assert m.complete_fork_join is True
        assert m.critical_paths == ((1, 3, 4),)

    def test_chain_motif_complete_without_flags(self, f1_store):
        m = _motif_by_sketch(f1_store)["A->B; B->C"]
        assert m.complete_fork_join is True


class TestChainTelescoping:
    def test_thousand_random_chains(self):
        rng = random.Random(99)
        table = LabelTable()
        ids = [table.intern(f"s{i}") for i in range(4)]
        for _ in range(1000):
            n = rng.randint(2, 6)
            labels = tuple(rng.choice(ids) for _ in range(n))
            p = canonicalize(labels, tuple((i, i + 1) for i in range(n - 1)))
            ts = [0]
            for _ in range(n - 1):
                ts.append(ts[-1] + rng.randint(0, 1000))
            # build a trace realizing exactly this chain
            order = _chain_order(p)
            points = [(k + 1, table.label_of(p.labels[v]), ts[k]) for k, v in enumerate(order)]
            edges = [(k + 1, k + 2) for k in range(n - 1)]
            t = build_trace("c", points, edges, table)
            from tracemotif.mining import enumerate_embeddings

            embs = enumerate_embeddings(p, t)
            assert embs, (labels, p.code_str)
            for emb in embs:
                total = sum(
                    t.point_by_id[emb.vertex_map[v]].ts_us
                    - t.point_by_id[emb.vertex_map[u]].ts_us
                    for u, v in p.edges
                )
                assert execution_time(emb) == total


def _chain_order(p):
    """Vertex sequence of a chain pattern from its unique source."""
    succ = {u: v for u, v in p.edges}
    (start,) = [v for v in range(p.num_vertices) if p.in_degree(v) == 0]
    order = [start]
    while order[-1] in succ:
        order.append(succ[order[-1]])
    return order
