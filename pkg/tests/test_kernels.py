"""Embedding kernel: both backends must agree bit for bit, output must be
lexicographically sorted, and the cap must set the truncated flag exactly
when embeddings were dropped."""
from __future__ import annotations

import random

import numpy as np
import pytest

from tracemotif._kernels import BACKEND, match_pattern
from tracemotif.mining import enumerate_embeddings
from tracemotif.model import LabelTable, build_trace
from tracemotif.patterns import canonicalize

BACKENDS = ["python"] + (["cython"] if BACKEND == "cython" else [])


def _random_trace(rng: random.Random, table: LabelTable, n_points=14, n_labels=3):
    points = [(0, "root", 0)]
    edges = []
    for pid in range(1, n_points):
        label = f"l{rng.randrange(n_labels)}"
        parent = rng.randrange(pid)
        ts = rng.randint(1, 50) + points[parent][2]
        points.append((pid, label, ts))
        edges.append((parent, pid))
        if pid > 2 and rng.random() < 0.4:
            extra = rng.randrange(pid)
            if extra != parent:
                a, b = sorted((extra, pid))
                if (a, b) not in edges and points[b][2] >= points[a][2]:
                    edges.append((a, b))
    return build_trace(f"r{rng.random()}", points, edges, table)


def _random_pattern(rng: random.Random, label_ids):
    n = rng.randint(2, 4)
    labels = tuple(rng.choice(label_ids) for _ in range(n))
    edges = {(i, i + 1) for i in range(n - 1)}
    if n > 2 and rng.random() < 0.5:
        edges.add((0, n - 1))
    return canonicalize(labels, tuple(sorted(edges)))


@pytest.fixture
def shared():
    rng = random.Random(20240817)
    table = LabelTable()
    table.intern("root")
    label_ids = [table.intern(f"l{i}") for i in range(3)]
    traces = [_random_trace(rng, table) for _ in range(25)]
    patterns = [_random_pattern(rng, label_ids) for _ in range(20)]
    return traces, patterns


class TestBackendEquivalence:
    @pytest.mark.skipif(BACKEND != "cython", reason="compiled backend unavailable")
    def test_backends_identical_across_random_inputs(self, shared):
        traces, patterns = shared
        compared = 0
        for t in traces:
            arrays = t.match_arrays
            for p in patterns:
                for cap in (1, 3, 10_000):
                    py, tpy = match_pattern(p, arrays, cap, backend="python")
                    cy, tcy = match_pattern(p, arrays, cap, backend="cython")
                    assert tpy == tcy
                    assert py.shape == cy.shape
                    assert np.array_equal(py, cy)
                    compared += 1
        assert compared > 1000

    def test_default_backend_matches_python(self, shared):
        traces, patterns = shared
        t = traces[0]
        for p in patterns[:5]:
            default, _ = match_pattern(p, t.match_arrays, 100)
            py, _ = match_pattern(p, t.match_arrays, 100, backend="python")
            assert np.array_equal(default, py)


class TestOutputContract:
    @pytest.mark.parametrize("backend", BACKENDS)
    def test_rows_lexicographically_sorted(self, shared, backend):
        traces, patterns = shared
        for t in traces[:10]:
            for p in patterns[:10]:
                rows, _ = match_pattern(p, t.match_arrays, 10_000, backend=backend)
                as_tuples = [tuple(r) for r in rows]
                assert as_tuples == sorted(as_tuples)
                assert len(set(as_tuples)) == len(as_tuples)

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_embeddings_are_injective_and_structure_preserving(self, shared, backend):
        traces, patterns = shared
        seen_any = False
        for t in traces[:10]:
            edge_set = {(e.src, e.dst) for e in t.edges}
            for p in patterns[:10]:
                rows, _ = match_pattern(p, t.match_arrays, 10_000, backend=backend)
                for row in rows:
                    seen_any = True
                    assert len(set(row.tolist())) == len(row)
                    for u, v in p.edges:
                        assert (int(row[u]), int(row[v])) in edge_set
                    for v, lab in enumerate(p.labels):
                        assert t.point_by_id[int(row[v])].label_id == lab
        assert seen_any

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_cap_truncates_exactly(self, backend):
        # K_{3,1}-ish: star with 5 A-sources into one B gives 5 embeddings
        # of A->B; cap below that truncates, cap at/above does not.
        t_table = LabelTable()
        points = [(9, "B", 10)] + [(i, "A", 0) for i in range(5)]
        edges = [(i, 9) for i in range(5)]
        t = build_trace("star", points, edges, t_table)
        p = canonicalize((t_table.id_of("A"), t_table.id_of("B")), ((0, 1),))

        full, trunc = match_pattern(p, t.match_arrays, 5, backend=backend)
        assert full.shape[0] == 5 and trunc is False
        part, trunc = match_pattern(p, t.match_arrays, 4, backend=backend)
        assert part.shape[0] == 4 and trunc is True
        assert [tuple(r) for r in part] == [tuple(r) for r in full[:4]]
        one, trunc = match_pattern(p, t.match_arrays, 1, backend=backend)
        assert one.shape[0] == 1 and trunc is True

    def test_no_matches_gives_empty_untruncated(self, table):
        t = build_trace("t", [(1, "A", 0), (2, "B", 1)], [(1, 2)], table)
        q = canonicalize((table.intern("Z"), table.intern("B")), ((0, 1),))
        rows, trunc = match_pattern(q, t.match_arrays, 10)
        assert rows.shape == (0, 2) and trunc is False

    def test_enumerate_embeddings_wraps_rows(self, f2_store):
        t = f2_store.traces[0]
        tbl = f2_store.label_table
        p = canonicalize((tbl.id_of("A"), tbl.id_of("B")), ((0, 1),))
        embs = enumerate_embeddings(p, t)
        assert [e.vertex_map for e in embs] == [(1, 2), (3, 4), (5, 6)]
