"""Shared fixtures: three small hand-checkable stores used across tests.

f1: three traces over labels A, B, C exercising chains and a fork.
f2: one trace holding three vertex-disjoint copies of A->B (tied together
    by a root point R so the trace stays connected; R adds no A->B edge).
f3: one diamond fork-join used for critical-path checks.
"""
from __future__ import annotations

import pytest

from tracemotif.model import LabelTable, TraceStore, build_trace
from tracemotif.patterns import Pattern, canonicalize


def make_pattern(table: LabelTable, vertices, edges) -> Pattern:
    """Canonical pattern from label strings and vertex-index edges."""
    return canonicalize(tuple(table.intern(v) for v in vertices), tuple(edges))


def f1_traces(table: LabelTable):
    t1 = build_trace(
        "T1", [(1, "A", 0), (2, "B", 10), (3, "C", 30)], [(1, 2), (2, 3)], table
    )
    t2 = build_trace(
        "T2", [(1, "A", 0), (2, "B", 12), (3, "C", 20)], [(1, 2), (2, 3)], table
    )
    t3 = build_trace(
        "T3", [(1, "A", 0), (2, "B", 5), (3, "C", 7)], [(1, 2), (1, 3)], table
    )
    return [t1, t2, t3]


@pytest.fixture
def table() -> LabelTable:
    return LabelTable()


@pytest.fixture
def f1_store(table) -> TraceStore:
    return TraceStore(traces=tuple(f1_traces(table)), label_table=table)


def f2_trace(table: LabelTable):
    # Three disjoint A->B copies at (0,5), (10,15), (20,25); the root R
    # keeps the trace connected without adding any A->B labeled edge.
    points = [
        (0, "R", 0),
        (1, "A", 0), (2, "B", 5),
        (3, "A", 10), (4, "B", 15),
        (5, "A", 20), (6, "B", 25),
    ]
    edges = [(0, 1), (0, 3), (0, 5), (1, 2), (3, 4), (5, 6)]
    return build_trace("T4", points, edges, table)


@pytest.fixture
def f2_store(table) -> TraceStore:
    return TraceStore(traces=(f2_trace(table),), label_table=table)


@pytest.fixture
def f2_padded_store(table) -> TraceStore:
    """T4 plus nine one-edge traces over labels unique to each trace."""
    traces = [f2_trace(table)]
    for i in range(9):
        traces.append(
            build_trace(
                f"U{i}",
                [(1, f"P{i}", 0), (2, f"Q{i}", 100)],
                [(1, 2)],
                table,
            )
        )
    return TraceStore(traces=tuple(traces), label_table=table)


def f3_trace(table: LabelTable):
    points = [(1, "F", 0), (2, "X", 10), (3, "Y", 15), (4, "J", 20)]
    edges = [(1, 2), (1, 3), (2, 4), (3, 4)]
    return build_trace("T5", points, edges, table)


@pytest.fixture
def f3_store(table) -> TraceStore:
    return TraceStore(traces=(f3_trace(table),), label_table=table)
