"""On-disk artifact documents: motif sets, lattices, manifests, reports.

All writers emit canonical JSON (sorted keys, fixed layout, trailing
newline) so identical inputs produce byte-identical files. Canonical codes
are relative to the label table a file was loaded under; to compare motifs
across files, load them with one shared LabelTable as cmd_diff and the
service do.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

from . import __version__
from .annotate import Distribution, Motif, MotifSet, Summary
from .diagnosis import AnomalyReport, CooccurrenceModel, DiffReport
from .errors import IoFailure, MalformedDocument, MissingField
from .lattice import MotifLattice, roots as lattice_roots
from .mining import MinedPattern, MiningConfig, SupportStats
from .model import LabelTable
from .patterns import Pattern

FORMAT_MOTIFS = "tracemotif.motifs/1"
FORMAT_LATTICE = "tracemotif.lattice/1"
FORMAT_MANIFEST = "tracemotif.manifest/1"
FORMAT_DIFF = "tracemotif.diff/1"
FORMAT_ANOMALIES = "tracemotif.anomalies/1"


def dumps_canonical(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def dump_json(doc, path) -> Path:
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(dumps_canonical(doc), encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {target}: {exc}") from exc
    return target


def load_json(path):
    target = Path(path)
    try:
        text = target.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {target}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{target}: invalid JSON: {exc}") from exc


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _require(doc: dict, name: str, context: str):
    if name not in doc:
        raise MissingField(name, context)
    return doc[name]


def config_to_doc(cfg: MiningConfig) -> dict:
    return {
        "sigma_across": cfg.sigma_across,
        "sigma_within": cfg.sigma_within,
        "max_edges": cfg.max_edges,
        "embedding_cap_per_trace": cfg.embedding_cap_per_trace,
    }


def config_from_doc(doc: dict) -> MiningConfig:
    return MiningConfig(
        sigma_across=_require(doc, "sigma_across", "config"),
        sigma_within=_require(doc, "sigma_within", "config"),
        max_edges=_require(doc, "max_edges", "config"),
        embedding_cap_per_trace=_require(doc, "embedding_cap_per_trace", "config"),
    )


def dist_to_doc(d: Distribution, include_samples: bool) -> dict:
    s = d.summary
    doc = {
        "summary": {
            "count": s.count,
            "min": s.min,
            "max": s.max,
            "mean": s.mean,
            "p50": s.p50,
            "p95": s.p95,
            "p99": s.p99,
        },
        "truncated": d.truncated,
    }
    if include_samples and d.samples is not None:
        doc["samples"] = list(d.samples)
    return doc


def dist_from_doc(doc: dict, context: str) -> Distribution:
    truncated = bool(doc.get("truncated", False))
    if "samples" in doc:
        return Distribution.from_samples(doc["samples"], truncated)
    s = _require(doc, "summary", context)
    summary = Summary(
        count=s["count"],
        min=s["min"],
        max=s["max"],
        mean=s["mean"],
        p50=s["p50"],
        p95=s["p95"],
        p99=s["p99"],
    )
    return Distribution(summary=summary, samples=None, truncated=truncated)


def motif_to_doc(
    m: Motif,
    table: LabelTable,
    mined: MinedPattern | None = None,
    include_embeddings: bool = False,
    include_edge_samples: bool = False,
) -> dict:
    doc = {
        "code": m.code_str,
        "sketch": m.pattern.label_sketch(table.label_of),
        "vertices": [
            {"index": i, "label": table.label_of(lab)}
            for i, lab in enumerate(m.pattern.labels)
        ],
        "edges": [[u, v] for u, v in m.pattern.edges],
        "support": {
            "containing_traces": sorted(m.support.containing_traces),
            "transaction_support": m.support.transaction_support,
            "max_within_count": m.support.max_within_count,
        },
        "exec_time_dist": dist_to_doc(m.exec_time_dist, include_samples=True),
        "edge_lat_dists": [
            dist_to_doc(d, include_samples=include_edge_samples)
            for d in m.edge_lat_dists
        ],
        "complete_fork_join": m.complete_fork_join,
        "embedding_counts": [[tid, count] for tid, count in m.embedding_counts],
        "truncated": m.truncated,
    }
    if include_embeddings and mined is not None:
        doc["embeddings"] = {
            te.trace_id: te.as_tuples() for te in mined.embeddings
        }
    return doc


def motif_from_doc(doc: dict, table: LabelTable) -> Motif:
    code = _require(doc, "code", "motif")
    vertices = _require(doc, "vertices", f"motif {code}")
    edges = _require(doc, "edges", f"motif {code}")
    labels = [0] * len(vertices)
    for vd in vertices:
        labels[vd["index"]] = table.intern(vd["label"])
    pattern = Pattern(labels=tuple(labels), edges=tuple((u, v) for u, v in edges))
    sup = _require(doc, "support", f"motif {code}")
    support = SupportStats(
        containing_traces=frozenset(sup["containing_traces"]),
        transaction_support=sup["transaction_support"],
        max_within_count=sup["max_within_count"],
    )
    exec_doc = _require(doc, "exec_time_dist", f"motif {code}")
    if "samples" not in exec_doc:
        raise MalformedDocument(f"motif {code}: exec_time_dist must carry samples")
    return Motif(
        pattern=pattern,
        support=support,
        exec_time_dist=dist_from_doc(exec_doc, f"motif {code}"),
        edge_lat_dists=tuple(
            dist_from_doc(d, f"motif {code}") for d in doc.get("edge_lat_dists", [])
        ),
        complete_fork_join=bool(doc.get("complete_fork_join", False)),
        critical_paths=None,
        embedding_counts=tuple(
            (tid, count) for tid, count in doc.get("embedding_counts", [])
        ),
        truncated=bool(doc.get("truncated", False)),
    )


def motifset_to_doc(
    ms: MotifSet,
    table: LabelTable,
    mined_by_code: dict[str, MinedPattern] | None = None,
    include_embeddings: bool = False,
    include_edge_samples: bool = False,
) -> dict:
    return {
        "format": FORMAT_MOTIFS,
        "config": config_to_doc(ms.config),
        "trace_count": ms.trace_count,
        "motifs": [
            motif_to_doc(
                m,
                table,
                mined=(mined_by_code or {}).get(m.code_str),
                include_embeddings=include_embeddings,
                include_edge_samples=include_edge_samples,
            )
            for m in ms.motifs
        ],
    }


def load_motifs(path, table: LabelTable | None = None) -> MotifSet:
    """Read a motif file; pass one shared table to compare across files."""
    doc = load_json(path)
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_MOTIFS:
        raise MalformedDocument(f"{path}: not a motif-set document")
    if table is None:
        table = LabelTable()
    config = config_from_doc(_require(doc, "config", "motif set"))
    motifs = tuple(
        motif_from_doc(md, table) for md in _require(doc, "motifs", "motif set")
    )
    return MotifSet(
        config=config,
        trace_count=_require(doc, "trace_count", "motif set"),
        motifs=tuple(sorted(motifs, key=lambda m: m.code)),
    )


def lattice_to_doc(lat: MotifLattice, table: LabelTable) -> dict:
    nodes = {}
    for code, m in lat.nodes.items():
        nodes[m.code_str] = {
            "level": m.pattern.num_edges,
            "sketch": m.pattern.label_sketch(table.label_of),
            "children": [lat.nodes[c].code_str for c in lat.child_codes[code]],
        }
    return {
        "format": FORMAT_LATTICE,
        "roots": [m.code_str for m in lattice_roots(lat)],
        "nodes": nodes,
    }


def manifest_to_doc(
    cfg: MiningConfig,
    inputs: list[tuple[str, str]],
    trace_count: int,
    motif_count: int,
) -> dict:
    return {
        "format": FORMAT_MANIFEST,
        "tool": "tracemotif",
        "version": __version__,
        "config": config_to_doc(cfg),
        "inputs": [{"path": name, "sha256": digest} for name, digest in sorted(inputs)],
        "trace_count": trace_count,
        "motif_count": motif_count,
    }


def diff_report_to_doc(
    report: DiffReport, baseline: MotifSet, candidate: MotifSet, table: LabelTable
) -> dict:
    sketches = {}
    for code in report.added:
        sketches[code] = candidate.by_code[code].pattern.label_sketch(table.label_of)
    for code in report.removed:
        sketches[code] = baseline.by_code[code].pattern.label_sketch(table.label_of)
    changed = []
    for e in report.latency_changed:
        sketches[e.code] = baseline.by_code[e.code].pattern.label_sketch(table.label_of)
        changed.append(
            {
                "code": e.code,
                "statistic": e.statistic,
                "p_value": e.p_value,
                "direction": e.direction,
                "baseline": dist_to_doc(
                    baseline.by_code[e.code].exec_time_dist, include_samples=False
                ),
                "candidate": dist_to_doc(
                    candidate.by_code[e.code].exec_time_dist, include_samples=False
                ),
            }
        )
    return {
        "format": FORMAT_DIFF,
        "alpha": report.alpha,
        "added": list(report.added),
        "removed": list(report.removed),
        "latency_changed": changed,
        "unchanged": report.unchanged,
        "sketches": sketches,
    }


def cooccurrence_to_doc(model: CooccurrenceModel) -> dict:
    return {
        "vocabulary": list(model.vocabulary),
        "rules": [
            {
                "antecedent": r.antecedent,
                "consequent": r.consequent,
                "kind": r.kind,
                "confidence": r.confidence,
                "support_count": r.support_count,
            }
            for r in model.rules
        ],
    }


def anomaly_report_to_doc(report: AnomalyReport, model: CooccurrenceModel) -> dict:
    return {
        "format": FORMAT_ANOMALIES,
        "model": cooccurrence_to_doc(model),
        "traces": [
            {
                "trace_id": t.trace_id,
                "score": t.score,
                "violated": [
                    {
                        "antecedent": r.antecedent,
                        "consequent": r.consequent,
                        "kind": r.kind,
                        "confidence": r.confidence,
                    }
                    for r in t.violated
                ],
                "motifs_present": list(t.motifs_present),
            }
            for t in report.traces
        ],
    }
