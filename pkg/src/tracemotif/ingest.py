"""Trace file parsing and writing, plus deterministic synthetic stores.

On-disk format: one trace document per .jsonl line, or a .json file
holding a single trace document or {"traces": [...]}. A document is
{"trace_id": str, "points": [{"id", "label", "ts_us", "kind"?,
"concurrent_branch"?}], "edges": [{"src", "dst"}]}. Latencies are never
stored; they are derived from timestamps on load.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Mapping

from .errors import InvalidSpec, IoFailure, MalformedDocument, MissingField
from .model import (
    KIND_ANNOTATION,
    POINT_KINDS,
    LabelTable,
    Trace,
    TracePoint,
    TraceStore,
    build_trace,
)
from .patterns import Pattern

ROOT_LABEL = "T_START"
FALLBACK_LABEL = "BG"


def _require(doc: Mapping, name: str, context: str):
    if name not in doc:
        raise MissingField(name, context)
    return doc[name]


def trace_from_doc(doc, table: LabelTable, *, clamp_negative: bool = False) -> Trace:
    if not isinstance(doc, dict):
        raise MalformedDocument(f"trace document must be an object, got {type(doc).__name__}")
    trace_id = _require(doc, "trace_id", "trace document")
    if not isinstance(trace_id, str) or not trace_id:
        raise MalformedDocument(f"trace_id must be a nonempty string, got {trace_id!r}")
    raw_points = _require(doc, "points", f"trace {trace_id!r}")
    raw_edges = _require(doc, "edges", f"trace {trace_id!r}")
    if not isinstance(raw_points, list) or not isinstance(raw_edges, list):
        raise MalformedDocument(f"trace {trace_id!r}: points and edges must be arrays")
    points = []
    for pd in raw_points:
        if not isinstance(pd, dict):
            raise MalformedDocument(f"trace {trace_id!r}: point must be an object")
        pid = _require(pd, "id", f"point in trace {trace_id!r}")
        label = _require(pd, "label", f"point in trace {trace_id!r}")
        ts = _require(pd, "ts_us", f"point in trace {trace_id!r}")
        if not isinstance(pid, int) or isinstance(pid, bool):
            raise MalformedDocument(f"trace {trace_id!r}: point id must be an integer")
        if not isinstance(label, str) or not label:
            raise MalformedDocument(f"trace {trace_id!r}: label must be a nonempty string")
        if not isinstance(ts, int) or isinstance(ts, bool) or ts < 0:
            raise MalformedDocument(f"trace {trace_id!r}: ts_us must be a nonnegative integer")
        kind = pd.get("kind", KIND_ANNOTATION)
        if kind not in POINT_KINDS:
            raise MalformedDocument(f"trace {trace_id!r}: unknown kind {kind!r}")
        flag = pd.get("concurrent_branch")
        if flag is not None and not isinstance(flag, bool):
            raise MalformedDocument(f"trace {trace_id!r}: concurrent_branch must be a boolean")
        points.append(
            TracePoint(
                id=pid,
                label=label,
                label_id=table.intern(label),
                ts_us=ts,
                kind=kind,
                concurrent_branch=flag,
            )
        )
    edges = []
    for ed in raw_edges:
        if not isinstance(ed, dict):
            raise MalformedDocument(f"trace {trace_id!r}: edge must be an object")
        src = _require(ed, "src", f"edge in trace {trace_id!r}")
        dst = _require(ed, "dst", f"edge in trace {trace_id!r}")
        if not isinstance(src, int) or not isinstance(dst, int):
            raise MalformedDocument(f"trace {trace_id!r}: edge endpoints must be integers")
        edges.append((src, dst))
    return build_trace(trace_id, points, edges, table, clamp_negative=clamp_negative)


def _docs_from_file(path: Path) -> Iterator:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    if path.suffix == ".jsonl":
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedDocument(f"{path}:{lineno}: invalid JSON: {exc}") from exc
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedDocument(f"{path}: invalid JSON: {exc}") from exc
        if isinstance(doc, dict) and "traces" in doc:
            traces = doc["traces"]
            if not isinstance(traces, list):
                raise MalformedDocument(f"{path}: 'traces' must be an array")
            yield from traces
        elif isinstance(doc, list):
            yield from doc
        else:
            yield doc


def parse_traces(
    path, table: LabelTable | None = None, *, clamp_negative: bool = False
) -> TraceStore:
    """Load a file or directory of trace files into a validated store.

    Files in a directory are read in sorted name order; the label table is
    built by first-seen interning, so identical inputs produce identical
    label ids.
    """
    root = Path(path)
    if not root.exists():
        raise IoFailure(f"no such path: {root}")
    if root.is_dir():
        files = sorted(
            p for p in root.iterdir() if p.suffix in (".json", ".jsonl") and p.is_file()
        )
        if not files:
            raise IoFailure(f"no .json or .jsonl trace files in {root}")
    else:
        files = [root]
    if table is None:
        table = LabelTable()
    traces = []
    for f in files:
        for doc in _docs_from_file(f):
            traces.append(trace_from_doc(doc, table, clamp_negative=clamp_negative))
    return TraceStore(traces=tuple(traces), label_table=table)


def trace_to_doc(t: Trace) -> dict:
    points = []
    for pt in sorted(t.points, key=lambda p: p.id):
        pd = {"id": pt.id, "label": pt.label, "ts_us": pt.ts_us, "kind": pt.kind}
        if pt.concurrent_branch is not None:
            pd["concurrent_branch"] = pt.concurrent_branch
        points.append(pd)
    edges = [
        {"src": e.src, "dst": e.dst}
        for e in sorted(t.edges, key=lambda e: (e.src, e.dst))
    ]
    return {"trace_id": t.trace_id, "points": points, "edges": edges}


def write_traces(store: TraceStore, path) -> Path:
    """Write the store to .jsonl or .json; a directory gets traces.jsonl.

    Output is byte-stable: fixed key order, points sorted by id, edges by
    (src, dst), one cycle of write/parse/write is a fixed point.
    """
    target = Path(path)
    if target.suffix not in (".json", ".jsonl"):
        target.mkdir(parents=True, exist_ok=True)
        target = target / "traces.jsonl"
    docs = [trace_to_doc(t) for t in store.traces]
    try:
        if target.suffix == ".jsonl":
            body = "".join(json.dumps(d, sort_keys=True, separators=(",", ":")) + "\n" for d in docs)
        else:
            body = json.dumps({"traces": docs}, sort_keys=True, indent=2) + "\n"
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(body, encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {target}: {exc}") from exc
    return target


@dataclass(frozen=True)
class PlantedPattern:
    """One pattern to embed in a controlled fraction of generated traces."""

    pattern: Pattern
    plant_fraction: float
    copies_per_trace: int = 1


@dataclass(frozen=True)
class SyntheticSpec:
    """Recipe for a deterministic synthetic store.

    Pattern labels are indices into a generated alphabet L00, L01, ...;
    latency_model maps (src_label, dst_label) string pairs to
    (mean_us, stddev_us), with default_latency_us for unlisted pairs.
    Background edges never reproduce a planted pattern's edge-label pair,
    so each planted pattern's transaction support is exactly
    round(plant_fraction * num_traces) / num_traces.
    """

    seed: int
    num_traces: int
    label_alphabet_size: int
    background_edges_per_trace: tuple[int, int] = (1, 4)
    planted_patterns: tuple[PlantedPattern, ...] = ()
    latency_model: Mapping[tuple[str, str], tuple[float, float]] = field(default_factory=dict)
    default_latency_us: tuple[float, float] = (1000.0, 200.0)

    def __post_init__(self) -> None:
        if self.num_traces < 1:
            raise InvalidSpec(f"num_traces must be >= 1, got {self.num_traces}")
        if self.label_alphabet_size < 1:
            raise InvalidSpec(f"label_alphabet_size must be >= 1, got {self.label_alphabet_size}")
        lo, hi = self.background_edges_per_trace
        if lo < 0 or hi < lo:
            raise InvalidSpec(f"bad background edge range ({lo}, {hi})")
        pair_sets = []
        for plant in self.planted_patterns:
            if not 0.0 <= plant.plant_fraction <= 1.0:
                raise InvalidSpec(f"plant_fraction must be in [0, 1], got {plant.plant_fraction}")
            if plant.copies_per_trace < 1:
                raise InvalidSpec(f"copies_per_trace must be >= 1, got {plant.copies_per_trace}")
            labels = plant.pattern.labels
            if any(lab >= self.label_alphabet_size for lab in labels):
                raise InvalidSpec("planted pattern labels must index into the alphabet")
            pair_sets.append({(labels[u], labels[v]) for u, v in plant.pattern.edges})
        for i in range(len(pair_sets)):
            for j in range(i + 1, len(pair_sets)):
                if pair_sets[i] & pair_sets[j]:
                    raise InvalidSpec(
                        "planted patterns must not share edge-label pairs; "
                        "shared pairs make planted support uncontrollable"
                    )


def alphabet_label(i: int) -> str:
    return f"L{i:02d}"


def generate_synthetic(spec: SyntheticSpec) -> TraceStore:
    """Pure function of the spec: same spec, same store, bit for bit."""
    rng = random.Random(spec.seed)
    alphabet = [alphabet_label(i) for i in range(spec.label_alphabet_size)]
    forbidden = {
        (alphabet[a], alphabet[b])
        for plant in spec.planted_patterns
        for a, b in (
            (plant.pattern.labels[u], plant.pattern.labels[v])
            for u, v in plant.pattern.edges
        )
    }
    hosts = []
    for plant in spec.planted_patterns:
        count = round(plant.plant_fraction * spec.num_traces)
        hosts.append(set(rng.sample(range(spec.num_traces), count)))

    def draw_latency(src_label: str, dst_label: str) -> int:
        mean, std = spec.latency_model.get(
            (src_label, dst_label), spec.default_latency_us
        )
        return int(round(max(0.0, rng.gauss(mean, std))))

    table = LabelTable()
    lo, hi = spec.background_edges_per_trace
    traces = []
    for ti in range(spec.num_traces):
        points = [(0, ROOT_LABEL, 0)]
        edges: list[tuple[int, int]] = []
        ts_of = {0: 0}
        label_of = {0: ROOT_LABEL}
        next_id = 1
        for pi, plant in enumerate(spec.planted_patterns):
            if ti not in hosts[pi]:
                continue
            p = plant.pattern
            labels = [alphabet[lab] for lab in p.labels]
            preds: list[list[int]] = [[] for _ in range(p.num_vertices)]
            for u, v in p.edges:
                preds[v].append(u)
            for _ in range(plant.copies_per_trace):
                vid = {v: next_id + v for v in range(p.num_vertices)}
                next_id += p.num_vertices
                for v in _pattern_topological(p):
                    if preds[v]:
                        ts = max(
                            ts_of[vid[u]] + draw_latency(labels[u], labels[v])
                            for u in preds[v]
                        )
                    else:
                        ts = draw_latency(ROOT_LABEL, labels[v])
                        edges.append((0, vid[v]))
                    ts_of[vid[v]] = ts
                    label_of[vid[v]] = labels[v]
                    points.append((vid[v], labels[v], ts))
                edges.extend((vid[u], vid[v]) for u, v in p.edges)
        for _ in range(rng.randint(lo, hi)):
            src = rng.choice([pid for pid, _, _ in points])
            src_label = label_of[src]
            allowed = [lab for lab in alphabet if (src_label, lab) not in forbidden]
            label = rng.choice(allowed) if allowed else FALLBACK_LABEL
            ts = ts_of[src] + draw_latency(src_label, label)
            points.append((next_id, label, ts))
            ts_of[next_id] = ts
            label_of[next_id] = label
            edges.append((src, next_id))
            next_id += 1
        traces.append(build_trace(f"synth-{ti:04d}", points, edges, table))
    return TraceStore(traces=tuple(traces), label_table=table)


def _pattern_topological(p: Pattern) -> list[int]:
    indeg = [0] * p.num_vertices
    succ: list[list[int]] = [[] for _ in range(p.num_vertices)]
    for u, v in p.edges:
        indeg[v] += 1
        succ[u].append(v)
    ready = sorted(v for v in range(p.num_vertices) if indeg[v] == 0)
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return order
