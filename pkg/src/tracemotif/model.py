"""Workflow-centric traces as weighted, labeled DAGs.

A trace records one request's execution: vertices are named trace points,
edges are happens-before relations weighted by the latency derived from
the endpoint timestamps. Traces are validated once and treated as
immutable afterwards, so they are safe to share across workers.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    CycleDetected,
    DanglingEdgeEndpoint,
    DisconnectedTrace,
    DuplicateEdge,
    DuplicatePointId,
    NegativeLatency,
)

MAX_LABEL_ID = 2**32 - 1

KIND_SPAN_START = "span_start"
KIND_SPAN_END = "span_end"
KIND_ANNOTATION = "annotation"
POINT_KINDS = frozenset({KIND_SPAN_START, KIND_SPAN_END, KIND_ANNOTATION})


def encode_edge_label(src_label_id: int, dst_label_id: int) -> int:
    """Pack an ordered pair of vertex label ids into one 64-bit edge label.

    The encoding is src * 2**32 + dst, so it is injective in the ordered
    pair and distinguishes the two orientations of an edge.
    """
    if not 0 <= src_label_id <= MAX_LABEL_ID:
        raise ValueError(f"src label id {src_label_id} out of 32-bit range")
    if not 0 <= dst_label_id <= MAX_LABEL_ID:
        raise ValueError(f"dst label id {dst_label_id} out of 32-bit range")
    return (src_label_id << 32) | dst_label_id


def decode_edge_label(edge_label: int) -> tuple[int, int]:
    """Inverse of :func:`encode_edge_label`."""
    return edge_label >> 32, edge_label & MAX_LABEL_ID


@dataclass(frozen=True)
class TracePoint:
    """One executed logging point: a span marker or an annotation."""

    id: int
    label: str
    label_id: int
    ts_us: int
    kind: str = KIND_ANNOTATION
    concurrent_branch: bool | None = None


@dataclass(frozen=True)
class TraceEdge:
    """Happens-before relation between two trace points."""

    src: int
    dst: int
    latency_us: int = 0


@dataclass(frozen=True)
class Trace:
    """A single request's workflow: a weakly connected, labeled DAG.

    Instances produced by :func:`validate_trace` satisfy all structural
    invariants and carry derived edge latencies. Construct candidates with
    the plain constructor and validate before mining.
    """

    trace_id: str
    points: tuple[TracePoint, ...]
    edges: tuple[TraceEdge, ...]

    @cached_property
    def point_by_id(self) -> Mapping[int, TracePoint]:
        return {p.id: p for p in self.points}

    @cached_property
    def successors(self) -> Mapping[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {p.id: [] for p in self.points}
        for e in self.edges:
            out[e.src].append(e.dst)
        return {k: tuple(sorted(v)) for k, v in out.items()}

    @cached_property
    def predecessors(self) -> Mapping[int, tuple[int, ...]]:
        inc: dict[int, list[int]] = {p.id: [] for p in self.points}
        for e in self.edges:
            inc[e.dst].append(e.src)
        return {k: tuple(sorted(v)) for k, v in inc.items()}

    @cached_property
    def match_arrays(self) -> "TraceArrays":
        return TraceArrays.from_trace(self)


@dataclass(frozen=True)
class TraceArrays:
    """Flat array view of a trace used by the embedding kernels.

    Point indices are assigned in ascending point-id order, so ascending
    index order equals ascending id order. Adjacency is CSR with sorted
    neighbor lists; ``by_label`` maps a label id to the sorted indices of
    points carrying it.
    """

    ids: np.ndarray  # int64, sorted ascending
    labels: np.ndarray  # int64 label id per index
    ts: np.ndarray  # int64 timestamp per index
    out_indptr: np.ndarray  # int32
    out_indices: np.ndarray  # int32
    in_indptr: np.ndarray  # int32
    in_indices: np.ndarray  # int32
    by_label: Mapping[int, np.ndarray]

    @classmethod
    def from_trace(cls, trace: Trace) -> "TraceArrays":
        pts = sorted(trace.points, key=lambda p: p.id)
        n = len(pts)
        ids = np.array([p.id for p in pts], dtype=np.int64)
        labels = np.array([p.label_id for p in pts], dtype=np.int64)
        ts = np.array([p.ts_us for p in pts], dtype=np.int64)
        idx = {p.id: i for i, p in enumerate(pts)}
        out: list[list[int]] = [[] for _ in range(n)]
        inc: list[list[int]] = [[] for _ in range(n)]
        for e in trace.edges:
            out[idx[e.src]].append(idx[e.dst])
            inc[idx[e.dst]].append(idx[e.src])
        out_indptr = np.zeros(n + 1, dtype=np.int32)
        in_indptr = np.zeros(n + 1, dtype=np.int32)
        for i in range(n):
            out[i].sort()
            inc[i].sort()
            out_indptr[i + 1] = out_indptr[i] + len(out[i])
            in_indptr[i + 1] = in_indptr[i] + len(inc[i])
        out_indices = np.array(
            [j for row in out for j in row] or [], dtype=np.int32
        )
        in_indices = np.array(
            [j for row in inc for j in row] or [], dtype=np.int32
        )
        by_label: dict[int, np.ndarray] = {}
        for i in range(n):
            by_label.setdefault(int(labels[i]), []).append(i)  # type: ignore[arg-type]
        by_label_arr = {
            lab: np.array(rows, dtype=np.int32) for lab, rows in by_label.items()
        }
        return cls(
            ids=ids,
            labels=labels,
            ts=ts,
            out_indptr=out_indptr,
            out_indices=out_indices,
            in_indptr=in_indptr,
            in_indices=in_indices,
            by_label=by_label_arr,
        )


class LabelTable:
    """Bidirectional label <-> label_id mapping, interned first-seen."""

    def __init__(self) -> None:
        self._by_label: dict[str, int] = {}
        self._by_id: list[str] = []

    def intern(self, label: str) -> int:
        lid = self._by_label.get(label)
        if lid is None:
            lid = len(self._by_id)
            if lid > MAX_LABEL_ID:
                raise ValueError("label table exceeds 32-bit id space")
            self._by_label[label] = lid
            self._by_id.append(label)
        return lid

    def id_of(self, label: str) -> int:
        return self._by_label[label]

    def label_of(self, label_id: int) -> str:
        return self._by_id[label_id]

    def __contains__(self, label: str) -> bool:
        return label in self._by_label

    def __len__(self) -> int:
        return len(self._by_id)

    def labels(self) -> tuple[str, ...]:
        return tuple(self._by_id)


@dataclass(frozen=True)
class TraceStore:
    """An ordered collection of validated traces sharing one label table."""

    traces: tuple[Trace, ...]
    label_table: LabelTable = field(default_factory=LabelTable, compare=False)

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for t in self.traces:
            if t.trace_id in seen:
                raise ValueError(f"duplicate trace_id {t.trace_id!r} in store")
            seen.add(t.trace_id)

    @property
    def k(self) -> int:
        return len(self.traces)

    @cached_property
    def by_id(self) -> Mapping[str, Trace]:
        return {t.trace_id: t for t in self.traces}


def validate_trace(candidate: Trace, *, clamp_negative: bool = False) -> Trace:
    """Check all trace invariants and derive edge latencies.

    Returns a new Trace whose edges carry latency_us = ts(dst) - ts(src).
    With ``clamp_negative`` latencies from skewed clocks clamp to zero
    instead of raising; timestamps are kept as given either way.

    Raises DuplicatePointId, DanglingEdgeEndpoint, DuplicateEdge,
    CycleDetected, NegativeLatency, or DisconnectedTrace.
    """
    tid = candidate.trace_id
    by_id: dict[int, TracePoint] = {}
    for p in candidate.points:
        if p.id in by_id:
            raise DuplicatePointId(f"point id {p.id} occurs twice", tid)
        if p.id < 0:
            raise DuplicatePointId(f"point id {p.id} is negative", tid)
        by_id[p.id] = p

    seen_edges: set[tuple[int, int]] = set()
    for e in candidate.edges:
        if e.src not in by_id or e.dst not in by_id:
            raise DanglingEdgeEndpoint(
                f"edge ({e.src}, {e.dst}) references a missing point", tid
            )
        if (e.src, e.dst) in seen_edges:
            raise DuplicateEdge(f"edge ({e.src}, {e.dst}) occurs twice", tid)
        seen_edges.add((e.src, e.dst))

    _check_acyclic(candidate, tid)

    derived: list[TraceEdge] = []
    for e in candidate.edges:
        latency = by_id[e.dst].ts_us - by_id[e.src].ts_us
        if latency < 0:
            if clamp_negative:
                latency = 0
            else:
                raise NegativeLatency(
                    f"edge ({e.src}, {e.dst}) has negative latency {latency}",
                    tid,
                )
        derived.append(TraceEdge(src=e.src, dst=e.dst, latency_us=latency))

    _check_connected(candidate, tid)

    return replace(candidate, edges=tuple(derived))


def _check_acyclic(t: Trace, tid: str) -> None:
    indeg = {p.id: 0 for p in t.points}
    succ: dict[int, list[int]] = {p.id: [] for p in t.points}
    for e in t.edges:
        indeg[e.dst] += 1
        succ[e.src].append(e.dst)
    ready = [pid for pid, d in indeg.items() if d == 0]
    done = 0
    while ready:
        pid = ready.pop()
        done += 1
        for nxt in succ[pid]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                ready.append(nxt)
    if done != len(t.points):
        raise CycleDetected("happens-before relation contains a cycle", tid)


def _check_connected(t: Trace, tid: str) -> None:
    if len(t.points) <= 1:
        return
    neigh: dict[int, list[int]] = {p.id: [] for p in t.points}
    for e in t.edges:
        neigh[e.src].append(e.dst)
        neigh[e.dst].append(e.src)
    start = t.points[0].id
    seen = {start}
    stack = [start]
    while stack:
        for nxt in neigh[stack.pop()]:
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    if len(seen) != len(t.points):
        raise DisconnectedTrace(
            f"only {len(seen)} of {len(t.points)} points are reachable", tid
        )


def topological_order(t: Trace) -> list[int]:
    """Deterministic topological order of a valid trace's point ids.

    Ready points are emitted by ascending (ts_us, id), so repeated calls
    and structurally equal traces order identically.
    """
    indeg = {p.id: 0 for p in t.points}
    for e in t.edges:
        indeg[e.dst] += 1
    ready = [
        (p.ts_us, p.id) for p in t.points if indeg[p.id] == 0
    ]
    heapq.heapify(ready)
    order: list[int] = []
    succ = t.successors
    by_id = t.point_by_id
    while ready:
        _, pid = heapq.heappop(ready)
        order.append(pid)
        for nxt in succ[pid]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                heapq.heappush(ready, (by_id[nxt].ts_us, nxt))
    return order


def build_trace(
    trace_id: str,
    points: Iterable[tuple[int, str, int]] | Sequence[TracePoint],
    edges: Iterable[tuple[int, int]],
    table: LabelTable,
    *,
    clamp_negative: bool = False,
) -> Trace:
    """Convenience constructor: intern labels, then validate.

    ``points`` is either TracePoint objects or (id, label, ts_us) triples.
    """
    pts: list[TracePoint] = []
    for p in points:
        if isinstance(p, TracePoint):
            pts.append(p)
        else:
            pid, label, ts = p
            pts.append(
                TracePoint(id=pid, label=label, label_id=table.intern(label), ts_us=ts)
            )
    candidate = Trace(
        trace_id=trace_id,
        points=tuple(pts),
        edges=tuple(TraceEdge(src=s, dst=d) for s, d in edges),
    )
    return validate_trace(candidate, clamp_negative=clamp_negative)
