"""Merge-law, pairing, and serialization tests for catalog ingestion."""

import json

import pytest

from climkg import ingest
from climkg.ingest import (
    HarmonizedRecord,
    IngestError,
    RawRecordPair,
    harmonize_corpus,
    is_empty,
    merge_records,
)

SCHEMA = ["title", "summary", "boxes"]


class TestEmptiness:
    @pytest.mark.parametrize("value", [None, "", "   ", "\t\n", [], {}, ()])
    def test_empty_values(self, value):
        assert is_empty(value)

    @pytest.mark.parametrize("value", ["x", " x ", [0], {"a": 1}, 0, 0.0, False])
    def test_non_empty_values(self, value):
        assert not is_empty(value)


class TestMergeLaw:
    def test_umm_preferred_when_both_present(self):
        pair = RawRecordPair("C1", {"title": "json title"}, {"title": "umm title"})
        rec = merge_records(pair, SCHEMA)
        assert rec.fields["title"] == ("umm title", "UMM")

    def test_json_fallback_when_umm_empty(self):
        for empty in (None, "", "  ", [], {}):
            pair = RawRecordPair("C1", {"title": "json title"}, {"title": empty})
            rec = merge_records(pair, SCHEMA)
            assert rec.fields["title"] == ("json title", "JSON")

    def test_absent_when_both_empty(self):
        pair = RawRecordPair("C1", {"title": ""}, {"title": None, "summary": "s"})
        rec = merge_records(pair, SCHEMA)
        assert "title" not in rec.fields

    def test_values_trimmed(self):
        pair = RawRecordPair("C1", {}, {"title": "  padded  "})
        assert merge_records(pair, SCHEMA).fields["title"][0] == "padded"

    def test_unknown_keys_preserved_in_extra(self):
        pair = RawRecordPair("C1", {"custom": "j"}, {"custom": "u", "other": [1]})
        rec = merge_records(pair, SCHEMA)
        assert rec.extra == {"custom": "u", "other": [1]}

    def test_both_documents_absent_rejected(self):
        with pytest.raises(IngestError):
            RawRecordPair("C1", {}, {})

    def test_one_sided_records_merge(self):
        rec = merge_records(RawRecordPair("C1", {"title": "only json"}, {}), SCHEMA)
        assert rec.fields["title"] == ("only json", "JSON")
        rec = merge_records(RawRecordPair("C2", {}, {"title": "only umm"}), SCHEMA)
        assert rec.fields["title"] == ("only umm", "UMM")


class TestCorpus:
    def test_sorted_and_duplicates_last_wins(self):
        pairs = [
            RawRecordPair("C2", {"title": "two"}, {}),
            RawRecordPair("C1", {"title": "first"}, {}),
            RawRecordPair("C2", {"title": "two-final"}, {}),
        ]
        records = harmonize_corpus(pairs, SCHEMA)
        assert [r.concept_id for r in records] == ["C1", "C2"]
        assert records[1].fields["title"][0] == "two-final"

    def test_jsonl_round_trip(self, tmp_path):
        records = harmonize_corpus(
            [RawRecordPair("C1", {"title": "t", "x": 1}, {"summary": "s"})], SCHEMA
        )
        path = tmp_path / "out.jsonl"
        assert ingest.write_jsonl(records, path) == 1
        back = [HarmonizedRecord.from_json_dict(d) for d in ingest.read_jsonl(path)]
        assert back[0].fields == records[0].fields
        assert back[0].extra == records[0].extra


class TestFixturePages:
    def test_fixture_corpus_pairs(self, corpus):
        pairs = list(ingest.fetch_fixture_pairs(corpus.dir))
        assert len(pairs) == 50
        assert all(p.json_doc and p.umm_doc for p in pairs)

    def test_malformed_page_skipped(self, tmp_path, caplog):
        (tmp_path / "00001.json").write_text('{"items": [{"concept_id": "C1", "title": "t"}]}')
        (tmp_path / "00002.json").write_text("{not json")
        pairs = list(ingest.fetch_fixture_pairs(tmp_path))
        assert [p.concept_id for p in pairs] == ["C1"]

    def test_document_without_id_skipped(self, tmp_path):
        (tmp_path / "00001.json").write_text(
            json.dumps({"items": [{"title": "anonymous"}, {"concept_id": "C9"}]})
        )
        pairs = list(ingest.fetch_fixture_pairs(tmp_path))
        assert [p.concept_id for p in pairs] == ["C9"]

    def test_offline_mode_requires_directory(self, tmp_path):
        with pytest.raises(IngestError, match="offline"):
            list(ingest.fetch_dual_format(tmp_path / "missing", offline=True))

    def test_bad_page_size_rejected(self, corpus):
        with pytest.raises(IngestError):
            list(ingest.fetch_dual_format(corpus.dir, page_size=0))


def test_default_schema_has_sixty_attributes():
    schema = ingest.load_default_schema()
    assert len(schema) == 60
    assert len(set(schema)) == 60
    assert "concept_id" in schema and "boxes" in schema
