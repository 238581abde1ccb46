"""Read-only HTTP view over mined motif artifacts.

The service loads one motif file (plus optional traces, a baseline motif
file, and a training corpus) into a shared label table at startup, then
answers lattice navigation, occurrence, diff, and anomaly queries.
Occurrences and highlights are recomputed on demand with the embedding
kernel, so a trace corpus other than the mining input works too.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .annotate import Motif, MotifSet
from .artifacts import (
    anomaly_report_to_doc,
    diff_report_to_doc,
    dist_to_doc,
    load_motifs,
    motif_to_doc,
)
from .diagnosis import diff_executions, score_anomalies, train_cooccurrence
from .errors import InvalidConfig, TraceMotifError, UnknownMotif
from .ingest import parse_traces, trace_to_doc
from .lattice import MotifLattice, build_lattice, children, roots
from .mining import enumerate_embeddings
from .model import LabelTable, TraceStore


@dataclass
class ServiceState:
    table: LabelTable
    motifset: MotifSet
    lattice: MotifLattice
    store: TraceStore | None = None
    baseline: MotifSet | None = None
    anomaly_doc: dict | None = None

    @property
    def by_code(self) -> dict[str, Motif]:
        return {m.code_str: m for m in self.motifset.motifs}


def build_state(
    motifs_path,
    traces_path=None,
    baseline_path=None,
    train_path=None,
    min_support: int = 5,
    conf_hi: float = 0.9,
    conf_lo: float = 0.1,
) -> ServiceState:
    table = LabelTable()
    ms = load_motifs(motifs_path, table)
    lattice = build_lattice(ms.motifs)
    store = parse_traces(traces_path, table) if traces_path else None
    baseline = load_motifs(baseline_path, table) if baseline_path else None
    anomaly_doc = None
    if train_path and store is not None:
        train = parse_traces(train_path, table)
        model = train_cooccurrence(
            train, ms.motifs, min_support=min_support, conf_hi=conf_hi, conf_lo=conf_lo
        )
        report = score_anomalies(model, store, ms.motifs)
        anomaly_doc = anomaly_report_to_doc(report, model)
    return ServiceState(
        table=table,
        motifset=ms,
        lattice=lattice,
        store=store,
        baseline=baseline,
        anomaly_doc=anomaly_doc,
    )


def summary_doc(m: Motif, table: LabelTable) -> dict:
    """Compact row for lattice listings."""
    return {
        "code": m.code_str,
        "sketch": m.pattern.label_sketch(table.label_of),
        "num_edges": m.pattern.num_edges,
        "num_vertices": m.pattern.num_vertices,
        "transaction_support": m.support.transaction_support,
        "containing_traces": len(m.support.containing_traces),
        "max_within_count": m.support.max_within_count,
        "occurrence_count": m.occurrence_count,
        "exec_time": dist_to_doc(m.exec_time_dist, include_samples=False),
        "complete_fork_join": m.complete_fork_join,
        "truncated": m.truncated,
    }


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="tracemotif", docs_url=None, redoc_url=None)
    # read-only API; lets the bundled explorer page run from any origin
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET", "POST"]
    )
    table = state.table

    def motif_or_404(code: str) -> Motif:
        m = state.by_code.get(code)
        if m is None:
            raise HTTPException(status_code=404, detail=f"no motif with code {code!r}")
        return m

    def store_or_400() -> TraceStore:
        if state.store is None:
            raise HTTPException(status_code=400, detail="no trace corpus loaded; start with --traces")
        return state.store

    @app.exception_handler(TraceMotifError)
    async def _domain_error(request: Request, exc: TraceMotifError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health")
    async def health():
        return {
            "status": "ok",
            "motifs": len(state.motifset.motifs),
            "traces": state.store.k if state.store else 0,
            "baseline": state.baseline is not None,
            "anomalies": state.anomaly_doc is not None,
        }

    @app.get("/motifs/roots")
    async def motif_roots():
        return {"roots": [summary_doc(m, table) for m in roots(state.lattice)]}

    @app.get("/motifs/{code}")
    async def motif_detail(code: str):
        m = motif_or_404(code)
        doc = motif_to_doc(m, table)
        doc["children"] = [c.code_str for c in children(state.lattice, m.code)]
        return doc

    @app.get("/motifs/{code}/children")
    async def motif_children(code: str):
        m = motif_or_404(code)
        try:
            kids = children(state.lattice, m.code)
        except UnknownMotif as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {"code": code, "children": [summary_doc(c, table) for c in kids]}

    @app.get("/motifs/{code}/occurrences")
    async def motif_occurrences(code: str):
        m = motif_or_404(code)
        store = store_or_400()
        cap = state.motifset.config.embedding_cap_per_trace
        occurrences = []
        for t in store.traces:
            embs = enumerate_embeddings(m.pattern, t, cap)
            if not embs:
                continue
            occurrences.append(
                {
                    "trace_id": t.trace_id,
                    "count": len(embs),
                    "vertex_maps": [list(e.vertex_map) for e in embs],
                }
            )
        return {"code": code, "occurrences": occurrences}

    @app.get("/traces/{trace_id}")
    async def trace_detail(trace_id: str, request: Request):
        store = store_or_400()
        t = store.by_id.get(trace_id)
        if t is None:
            raise HTTPException(status_code=404, detail=f"no trace {trace_id!r}")
        doc = {"trace": trace_to_doc(t)}
        code = request.query_params.get("highlight")
        if code is not None:
            m = motif_or_404(code)
            cap = state.motifset.config.embedding_cap_per_trace
            embs = enumerate_embeddings(m.pattern, t, cap)
            points = sorted({pid for e in embs for pid in e.vertex_map})
            edges = sorted(
                {
                    (e.vertex_map[u], e.vertex_map[v])
                    for e in embs
                    for u, v in m.pattern.edges
                }
            )
            doc["highlight"] = {
                "code": code,
                "points": points,
                "edges": [[u, v] for u, v in edges],
                "vertex_maps": [list(e.vertex_map) for e in embs],
            }
        return doc

    @app.post("/diff")
    async def diff(request: Request):
        if state.baseline is None:
            raise HTTPException(status_code=400, detail="no baseline loaded; start with --baseline")
        body = b""
        try:
            body = await request.body()
            params = json.loads(body) if body else {}
        except json.JSONDecodeError:
            raise HTTPException(status_code=400, detail="request body must be JSON")
        if not isinstance(params, dict):
            raise HTTPException(status_code=400, detail="request body must be a JSON object")
        alpha = params.get("alpha", 0.05)
        if not isinstance(alpha, (int, float)) or isinstance(alpha, bool):
            raise HTTPException(status_code=400, detail="alpha must be a number")
        try:
            report = diff_executions(state.baseline, state.motifset, alpha=float(alpha))
        except InvalidConfig as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return diff_report_to_doc(report, state.baseline, state.motifset, table)

    @app.get("/anomalies")
    async def anomalies():
        if state.anomaly_doc is None:
            raise HTTPException(
                status_code=400,
                detail="anomaly scoring not configured; start with --traces and --train",
            )
        return state.anomaly_doc

    return app
