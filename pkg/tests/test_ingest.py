"""File format round trips, malformed-input errors, synthetic generation."""
from __future__ import annotations

import json

import pytest

from tracemotif.errors import (
    InvalidSpec,
    IoFailure,
    MalformedDocument,
    MissingField,
)
from tracemotif.ingest import (
    PlantedPattern,
    SyntheticSpec,
    generate_synthetic,
    parse_traces,
    trace_from_doc,
    trace_to_doc,
    write_traces,
)
from tracemotif.mining import MiningConfig, mine_patterns
from tracemotif.model import LabelTable
from tracemotif.patterns import canonicalize

from .conftest import f1_traces


def _doc(**overrides):
    doc = {
        "trace_id": "t",
        "points": [
            {"id": 1, "label": "A", "ts_us": 0},
            {"id": 2, "label": "B", "ts_us": 5, "kind": "span_start"},
        ],
        "edges": [{"src": 1, "dst": 2}],
    }
    doc.update(overrides)
    return doc


class TestTraceFromDoc:
    def test_parses_defaults(self):
        t = trace_from_doc(_doc(), LabelTable())
        assert t.trace_id == "t"
        assert t.point_by_id[1].kind == "annotation"
        assert t.point_by_id[2].kind == "span_start"
        assert t.edges[0].latency_us == 5

    def test_missing_ts_us(self):
        doc = _doc()
        del doc["points"][0]["ts_us"]
        with pytest.raises(MissingField) as exc:
            trace_from_doc(doc, LabelTable())
        assert "ts_us" in str(exc.value)

    def test_missing_trace_id(self):
        doc = _doc()
        del doc["trace_id"]
        with pytest.raises(MissingField):
            trace_from_doc(doc, LabelTable())

    def test_unknown_kind(self):
        doc = _doc()
        doc["points"][0]["kind"] = "mystery"
        with pytest.raises(MalformedDocument):
            trace_from_doc(doc, LabelTable())

    def test_non_integer_timestamp(self):
        doc = _doc()
        doc["points"][0]["ts_us"] = "soon"
        with pytest.raises(MalformedDocument):
            trace_from_doc(doc, LabelTable())


class TestRoundTrip:
    def _f1_store(self):
        table = LabelTable()
        from tracemotif.model import TraceStore

        return TraceStore(traces=tuple(f1_traces(table)), label_table=table)

    @pytest.mark.parametrize("suffix", [".jsonl", ".json"])
    def test_write_parse_preserves_structure(self, tmp_path, suffix):
        store = self._f1_store()
        path = write_traces(store, tmp_path / f"traces{suffix}")
        back = parse_traces(path)
        assert back.k == 3
        for orig, re in zip(store.traces, back.traces):
            assert trace_to_doc(orig) == trace_to_doc(re)

    def test_write_is_byte_stable(self, tmp_path):
        store = self._f1_store()
        p1 = write_traces(store, tmp_path / "a.jsonl")
        once = p1.read_bytes()
        back = parse_traces(p1)
        p2 = write_traces(back, tmp_path / "b.jsonl")
        assert p2.read_bytes() == once

    def test_directory_of_files(self, tmp_path):
        store = self._f1_store()
        write_traces(store, tmp_path / "part1.jsonl")
        (tmp_path / "notes.txt").write_text("ignored")
        back = parse_traces(tmp_path)
        assert back.k == 3

    def test_missing_path(self, tmp_path):
        with pytest.raises(IoFailure):
            parse_traces(tmp_path / "absent.jsonl")

    def test_empty_directory(self, tmp_path):
        with pytest.raises(IoFailure):
            parse_traces(tmp_path)

    def test_bad_json_line_reports_position(self, tmp_path):
        p = tmp_path / "bad.jsonl"
        ok = ('{"trace_id": "a", "points": '
              '[{"id": 1, "label": "A", "ts_us": 0}], "edges": []}')
        p.write_text(ok + "\nnot json\n")
        with pytest.raises(MalformedDocument) as exc:
            parse_traces(p)
        assert ":2" in str(exc.value)


def _chain_pattern():
    return canonicalize((0, 1, 2), ((0, 1), (1, 2)))


class TestSyntheticSpec:
    def test_rejects_label_outside_alphabet(self):
        with pytest.raises(InvalidSpec):
            SyntheticSpec(
                seed=1, num_traces=10, label_alphabet_size=2,
                planted_patterns=(PlantedPattern(_chain_pattern(), 0.5),),
            )

    def test_rejects_bad_fraction(self):
        with pytest.raises(InvalidSpec):
            SyntheticSpec(
                seed=1, num_traces=10, label_alphabet_size=4,
                planted_patterns=(PlantedPattern(_chain_pattern(), 1.5),),
            )

    def test_rejects_shared_edge_label_pairs(self):
        a = canonicalize((0, 1), ((0, 1),))
        b = canonicalize((0, 1, 2), ((0, 1), (1, 2)))  # shares pair (0, 1)
        with pytest.raises(InvalidSpec):
            SyntheticSpec(
                seed=1, num_traces=10, label_alphabet_size=4,
                planted_patterns=(PlantedPattern(a, 0.5), PlantedPattern(b, 0.5)),
            )


class TestGenerateSynthetic:
    def _spec(self, **kw):
        base = dict(
            seed=42, num_traces=20, label_alphabet_size=5,
            planted_patterns=(PlantedPattern(_chain_pattern(), 0.8),),
        )
        base.update(kw)
        return SyntheticSpec(**base)

    def test_deterministic(self):
        a = generate_synthetic(self._spec())
        b = generate_synthetic(self._spec())
        assert [trace_to_doc(t) for t in a.traces] == [
            trace_to_doc(t) for t in b.traces
        ]

    def test_seed_changes_output(self):
        a = generate_synthetic(self._spec())
        b = generate_synthetic(self._spec(seed=43))
        assert [trace_to_doc(t) for t in a.traces] != [
            trace_to_doc(t) for t in b.traces
        ]

    def test_planted_support_is_exact(self):
        store = generate_synthetic(self._spec())
        p = _chain_pattern()
        table = store.label_table
        mapped = canonicalize(
            tuple(table.id_of(f"L{i:02d}") for i in p.labels), p.edges
        )
        cfg = MiningConfig(sigma_across=0.5, sigma_within=None, max_edges=2,
                           embedding_cap_per_trace=1000)
        mined = {m.pattern.code: m for m in mine_patterns(store, cfg)}
        assert mapped.code in mined
        got = mined[mapped.code]
        assert got.support.transaction_support == pytest.approx(16 / 20)
        assert len(got.support.containing_traces) == 16

    def test_copies_per_trace(self):
        spec = self._spec(
            planted_patterns=(
                PlantedPattern(_chain_pattern(), 1.0, copies_per_trace=2),
            ),
        )
        store = generate_synthetic(spec)
        from tracemotif.mining import enumerate_embeddings

        p = _chain_pattern()
        table = store.label_table
        mapped = canonicalize(
            tuple(table.id_of(f"L{i:02d}") for i in p.labels), p.edges
        )
        for t in store.traces:
            assert len(enumerate_embeddings(mapped, t)) >= 2

    def test_all_traces_validate_and_root_exists(self):
        store = generate_synthetic(self._spec())
        for t in store.traces:
            assert t.point_by_id[0].label == "T_START"
            assert t.point_by_id[0].ts_us == 0

    def test_round_trip_through_files(self, tmp_path):
        store = generate_synthetic(self._spec(num_traces=50))
        path = write_traces(store, tmp_path / "synth.jsonl")
        back = parse_traces(path)
        assert back.k == 50
        assert [trace_to_doc(t) for t in store.traces] == [
            trace_to_doc(t) for t in back.traces
        ]
