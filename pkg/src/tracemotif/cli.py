"""Command-line interface.

Exit codes: 0 success (for diff/anomalies: no findings), 2 findings
present, 1 any error. All artifacts are byte-stable across reruns on
identical inputs.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .annotate import MotifSet, annotate_all
from .artifacts import (
    anomaly_report_to_doc,
    diff_report_to_doc,
    dump_json,
    lattice_to_doc,
    load_motifs,
    manifest_to_doc,
    motifset_to_doc,
    sha256_file,
)
from .diagnosis import diff_executions, score_anomalies, train_cooccurrence
from .errors import InvalidSpec, TraceMotifError
from .ingest import (
    PlantedPattern,
    SyntheticSpec,
    generate_synthetic,
    parse_traces,
    write_traces,
)
from .lattice import build_lattice
from .mining import (
    DEFAULT_EMBEDDING_CAP,
    DEFAULT_MAX_EDGES,
    MiningConfig,
    mine_patterns,
)
from .model import LabelTable, TraceStore
from .patterns import Pattern, canonicalize

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FINDINGS = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; 2 is reserved for findings here.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _trace_files(path: Path) -> list[Path]:
    if path.is_dir():
        return sorted(
            p for p in path.iterdir() if p.suffix in (".json", ".jsonl") and p.is_file()
        )
    return [path]


def _load_store(paths, table: LabelTable, *, clamp_negative: bool = False) -> TraceStore:
    traces = []
    for raw in paths:
        store = parse_traces(raw, table, clamp_negative=clamp_negative)
        traces.extend(store.traces)
    return TraceStore(traces=tuple(traces), label_table=table)


def _mining_config(args) -> MiningConfig:
    sigma_across = args.sigma_across
    sigma_within = args.sigma_within
    if sigma_across is None and sigma_within is None:
        sigma_across = 0.75
    return MiningConfig(
        sigma_across=sigma_across,
        sigma_within=sigma_within,
        max_edges=args.max_edges,
        embedding_cap_per_trace=args.embedding_cap,
    )


def cmd_mine(args) -> int:
    table = LabelTable()
    store = _load_store(args.inputs, table, clamp_negative=args.clamp_negative)
    cfg = _mining_config(args)
    mined = mine_patterns(store, cfg)
    motifs = annotate_all(mined, store)
    ms = MotifSet(config=cfg, trace_count=store.k, motifs=tuple(motifs))
    lattice = build_lattice(motifs)

    out = Path(args.out)
    mined_by_code = {m.pattern.code_str: m for m in mined}
    dump_json(
        motifset_to_doc(
            ms,
            table,
            mined_by_code=mined_by_code,
            include_embeddings=args.include_embeddings,
            include_edge_samples=args.include_edge_samples,
        ),
        out / "motifs.json",
    )
    dump_json(lattice_to_doc(lattice, table), out / "lattice.json")
    inputs = [
        (str(f), sha256_file(f)) for raw in args.inputs for f in _trace_files(Path(raw))
    ]
    dump_json(
        manifest_to_doc(cfg, inputs, trace_count=store.k, motif_count=len(motifs)),
        out / "manifest.json",
    )
    print(f"mined {len(motifs)} motifs from {store.k} traces -> {out}")
    return EXIT_OK


def cmd_diff(args) -> int:
    table = LabelTable()
    baseline = load_motifs(args.baseline, table)
    candidate = load_motifs(args.candidate, table)
    report = diff_executions(baseline, candidate, alpha=args.alpha)
    if args.out:
        dump_json(diff_report_to_doc(report, baseline, candidate, table), args.out)
    print(
        f"added {len(report.added)}, removed {len(report.removed)}, "
        f"latency changed {len(report.latency_changed)}, unchanged {report.unchanged}"
    )
    for code in report.added:
        print(f"  added   {code}")
    for code in report.removed:
        print(f"  removed {code}")
    for e in report.latency_changed:
        print(
            f"  {e.direction:7s} {e.code}  D={e.statistic:.4f}  p_adj={e.p_value:.4g}"
        )
    return EXIT_FINDINGS if report.has_findings else EXIT_OK


def cmd_anomalies(args) -> int:
    table = LabelTable()
    ms = load_motifs(args.motifs, table)
    train = _load_store([args.train], table)
    test = _load_store([args.test], table)
    model = train_cooccurrence(
        train,
        ms.motifs,
        min_support=args.min_support,
        conf_hi=args.conf_hi,
        conf_lo=args.conf_lo,
    )
    report = score_anomalies(model, test, ms.motifs)
    if args.out:
        dump_json(anomaly_report_to_doc(report, model), args.out)
    flagged = [t for t in report.traces if t.score > 0.0]
    print(f"{len(model.rules)} rules; {len(flagged)}/{len(report.traces)} traces flagged")
    for t in flagged[: args.top]:
        print(f"  {t.trace_id}  score={t.score:.3f}  violations={len(t.violated)}")
    return EXIT_FINDINGS if flagged else EXIT_OK


def _parse_plant(text: str) -> PlantedPattern:
    """Parse '0>1,1>2@0.8x2': label-index edges, plant fraction, copies."""
    spec = text
    copies = 1
    if "x" in spec:
        spec, _, tail = spec.rpartition("x")
        copies = int(tail)
    if "@" not in spec:
        raise InvalidSpec(f"plant spec needs '@fraction': {text!r}")
    edge_part, _, frac_part = spec.partition("@")
    fraction = float(frac_part)
    order: list[int] = []
    edges = []
    for hop in edge_part.split(","):
        a, sep, b = hop.partition(">")
        if not sep:
            raise InvalidSpec(f"plant spec edge needs 'a>b': {hop!r}")
        pair = []
        for tok in (a, b):
            lab = int(tok)
            if lab not in order:
                order.append(lab)
            pair.append(order.index(lab))
        edges.append((pair[0], pair[1]))
    pattern = canonicalize(tuple(order), tuple(edges))
    return PlantedPattern(pattern=pattern, plant_fraction=fraction, copies_per_trace=copies)


def _parse_latency(entries) -> dict[tuple[str, str], tuple[float, float]]:
    """Parse repeated 'SRC>DST:MEAN,STD' into a latency model."""
    model = {}
    for text in entries or ():
        pair_part, sep, ms_part = text.partition(":")
        src, sep2, dst = pair_part.partition(">")
        if not sep or not sep2:
            raise InvalidSpec(f"latency spec needs 'SRC>DST:MEAN,STD': {text!r}")
        mean_s, _, std_s = ms_part.partition(",")
        model[(src, dst)] = (float(mean_s), float(std_s or 0.0))
    return model


def cmd_generate(args) -> int:
    spec = SyntheticSpec(
        seed=args.seed,
        num_traces=args.traces,
        label_alphabet_size=args.alphabet,
        background_edges_per_trace=(args.background[0], args.background[1]),
        planted_patterns=tuple(_parse_plant(s) for s in args.plant or ()),
        latency_model=_parse_latency(args.latency),
    )
    store = generate_synthetic(spec)
    target = write_traces(store, args.out)
    print(f"wrote {store.k} traces -> {target}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import build_state, create_app

    state = build_state(
        motifs_path=args.motifs,
        traces_path=args.traces,
        baseline_path=args.baseline,
        train_path=args.train,
        min_support=args.min_support,
        conf_hi=args.conf_hi,
        conf_lo=args.conf_lo,
    )
    app = create_app(state)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def _add_mining_flags(p: _Parser) -> None:
    p.add_argument("--sigma-across", type=float, default=None,
                   help="min fraction of traces containing the pattern (default 0.75 when neither threshold is given)")
    p.add_argument("--sigma-within", type=int, default=None,
                   help="min within-trace repetition count; a pattern passes on either threshold")
    p.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    p.add_argument("--embedding-cap", type=int, default=DEFAULT_EMBEDDING_CAP,
                   help="per-trace embedding enumeration cap")


def _add_rule_flags(p: _Parser) -> None:
    p.add_argument("--min-support", type=int, default=5,
                   help="min antecedent trace count for a rule")
    p.add_argument("--conf-hi", type=float, default=0.9)
    p.add_argument("--conf-lo", type=float, default=0.1)


def build_parser() -> _Parser:
    parser = _Parser(prog="tracemotif", description=__doc__)
    parser.add_argument("--version", action="version", version=f"tracemotif {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", parents=[], help="mine motifs from trace files")
    p.add_argument("inputs", nargs="+", help="trace files or directories")
    p.add_argument("-o", "--out", required=True, help="output directory")
    _add_mining_flags(p)
    p.add_argument("--clamp-negative", action="store_true",
                   help="clamp negative edge latencies to zero instead of rejecting")
    p.add_argument("--include-embeddings", action="store_true",
                   help="store per-trace vertex maps in motifs.json")
    p.add_argument("--include-edge-samples", action="store_true",
                   help="store raw per-edge latency samples in motifs.json")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("diff", help="compare two motif files")
    p.add_argument("baseline")
    p.add_argument("candidate")
    p.add_argument("--alpha", type=float, default=0.05,
                   help="significance level after multiple-test adjustment")
    p.add_argument("-o", "--out", help="write the diff report as JSON")
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("anomalies", help="score traces against co-occurrence rules")
    p.add_argument("--motifs", required=True, help="motifs.json from a mine run")
    p.add_argument("--train", required=True, help="traces the rules are learned from")
    p.add_argument("--test", required=True, help="traces to score")
    _add_rule_flags(p)
    p.add_argument("--top", type=int, default=10, help="flagged traces to print")
    p.add_argument("-o", "--out", help="write the anomaly report as JSON")
    p.set_defaults(func=cmd_anomalies)

    p = sub.add_parser("generate", help="write a deterministic synthetic store")
    p.add_argument("-o", "--out", required=True, help="output .jsonl/.json file or directory")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--traces", type=int, required=True)
    p.add_argument("--alphabet", type=int, required=True, help="label alphabet size")
    p.add_argument("--background", type=int, nargs=2, default=(1, 4),
                   metavar=("LO", "HI"), help="background edges per trace")
    p.add_argument("--plant", action="append",
                   help="planted pattern, e.g. '0>1,1>2@0.8' or '0>1@0.5x2'")
    p.add_argument("--latency", action="append",
                   help="latency model entry 'SRC>DST:MEAN,STD' in microseconds")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("serve", help="serve motifs over HTTP")
    p.add_argument("--motifs", required=True)
    p.add_argument("--traces", help="trace file or directory for occurrence lookups")
    p.add_argument("--baseline", help="motif file to diff against")
    p.add_argument("--train", help="traces for co-occurrence rules (enables /anomalies)")
    _add_rule_flags(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TraceMotifError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
