"""Routing, temporal logic, multi-criteria search, and cache tests."""

import datetime
import sqlite3

import pytest

from climkg.discovery import (
    DiscoveryError,
    DiscoveryQuery,
    DiscoveryResult,
    ResultCache,
    RoutingError,
    multi_criteria_search,
    parse_time,
    resolve_cesm_variables,
    route_search,
    temporal_overlap,
    topk_by_embedding,
)
from climkg.embedding import HashEmbedder

from conftest import NYC_CONCEPT_ID


class TestRouting:
    def test_vector_for_embedded_labels(self):
        for label in ("DataCategory", "Location", "Variable", "ScienceKeyword"):
            assert route_search(label) == "vector"

    def test_text_for_plain_labels(self):
        for label in ("Dataset", "Organization", "Link", "CESMVariable"):
            assert route_search(label) == "text"

    def test_cesm_flag_flips_route(self):
        assert route_search("CESMVariable", embed_cesm_variable=True) == "vector"

    def test_unknown_label(self):
        with pytest.raises(RoutingError):
            route_search("Gremlin")

    def test_topk_on_unembedded_label_raises(self, graph):
        with pytest.raises(RoutingError, match="no embeddings"):
            topk_by_embedding(graph, HashEmbedder().embed_text("x"), "Dataset", 3)

    def test_topk_scores_descending(self, graph):
        hits = topk_by_embedding(
            graph, HashEmbedder().embed_text("sea level tide gauge"),
            "DataCategory", 5,
        )
        scores = [s for _, s in hits]
        assert scores == sorted(scores, reverse=True)
        assert len(hits) == 5


class TestTemporal:
    def test_bare_year_expansion(self):
        assert parse_time("2005", "t") == datetime.date(2005, 1, 1)
        assert parse_time("2005", "t", end=True) == datetime.date(2005, 12, 31)
        assert parse_time(2005, "t") == datetime.date(2005, 1, 1)

    def test_iso_formats(self):
        assert parse_time("2005-06-15", "t") == datetime.date(2005, 6, 15)
        assert parse_time("2005-06-15T12:00:00Z", "t") == datetime.date(2005, 6, 15)

    def test_unparseable(self):
        with pytest.raises(DiscoveryError, match="unparseable"):
            parse_time("soon", "t")

    def test_interval_logic(self):
        bounds = ("2000-01-01", "2010-12-31")
        assert temporal_overlap(bounds, {"after": "2005"})
        assert not temporal_overlap(bounds, {"before": "1999"})
        assert temporal_overlap(bounds, {"between": ["2009", "2020"]})
        assert not temporal_overlap(bounds, {"between": ["2011", "2020"]})

    def test_open_end_is_unbounded(self):
        assert temporal_overlap(("2000-01-01", None), {"after": "2500"})

    def test_unknown_constraint(self):
        with pytest.raises(DiscoveryError):
            temporal_overlap(("2000", "2001"), {"during": "2000"})


class TestQueryValidation:
    def test_k_must_be_positive(self):
        with pytest.raises(DiscoveryError):
            DiscoveryQuery(text="x", k=0)

    def test_between_ordering_enforced(self):
        with pytest.raises(DiscoveryError, match="start <= end"):
            DiscoveryQuery(text="x", temporal={"between": ["2020", "2010"]})


class TestMultiCriteria:
    def test_unconstrained_search_returns_candidates(self, graph):
        results = multi_criteria_search(
            DiscoveryQuery(text="precipitation analysis", k=5),
            graph, HashEmbedder(),
        )
        assert results
        ranks = [(-r.score, r.dataset_id) for r in results]
        assert ranks == sorted(ranks)

    def test_organization_filter(self, graph):
        results = multi_criteria_search(
            DiscoveryQuery(text="sea level tide gauge", k=10,
                           organization="NOAA"),
            graph, HashEmbedder(),
        )
        assert results
        for r in results:
            assert {"organization": "NOAA"} in r.matched_constraints

    def test_temporal_filter_drops_expired(self, graph):
        base = DiscoveryQuery(text="sea surface temperature", k=10)
        constrained = DiscoveryQuery(
            text="sea surface temperature", k=10, temporal={"after": "2021"}
        )
        all_hits = multi_criteria_search(base, graph, HashEmbedder())
        late_hits = multi_criteria_search(constrained, graph, HashEmbedder())
        assert len(late_hits) < len(all_hits)

    def test_spatial_membership_filter(self, graph):
        results = multi_criteria_search(
            DiscoveryQuery(text="sea level tide gauge", k=10,
                           spatial_text="New York", temporal={"after": "2000"}),
            graph, HashEmbedder(),
        )
        assert len(results) == 1
        assert results[0].provenance["plan"] == "vector"

    def test_zero_candidates_is_empty_not_error(self, graph):
        results = multi_criteria_search(
            DiscoveryQuery(text="zzz qqq xxx", k=3,
                           organization="Nonexistent Agency"),
            graph, HashEmbedder(),
        )
        assert results == []

    def test_resolve_cesm_variables_unknown_dataset(self, graph):
        with pytest.raises(DiscoveryError):
            resolve_cesm_variables(graph, "0000000000000000")


class TestResultCache:
    def _result(self, ds="d1", score=0.5):
        return DiscoveryResult(dataset_id=ds, title="T", score=score)

    def test_persist_and_recall(self, tmp_path):
        cache = ResultCache(tmp_path / "cache.sqlite")
        cache.persist("q1", [self._result("d1"), self._result("d2", 0.4)])
        rows = cache.recall("q1")
        assert {r["dataset_id"] for r in rows} == {"d1", "d2"}
        assert cache.recall("other") == []
        cache.close()

    def test_upsert_on_same_key(self, tmp_path):
        cache = ResultCache(tmp_path / "cache.sqlite")
        cache.persist("q", [self._result("d1", 0.1)])
        cache.persist("q", [self._result("d1", 0.9)])
        rows = cache.recall("q")
        assert len(rows) == 1 and rows[0]["score"] == 0.9
        cache.close()

    def test_shared_across_sessions(self, tmp_path):
        path = tmp_path / "cache.sqlite"
        first = ResultCache(path)
        first.persist("q", [self._result()])
        first.close()
        second = ResultCache(path)
        assert second.recall("q")
        second.close()

    def test_corrupt_file_backed_up_and_rebuilt(self, tmp_path):
        path = tmp_path / "cache.sqlite"
        path.write_bytes(b"this is not a sqlite database at all" * 10)
        cache = ResultCache(path)
        cache.persist("q", [self._result()])
        assert cache.recall("q")
        assert path.with_suffix(".sqlite.corrupt").exists()
        cache.close()
        # the rebuilt store is a healthy database
        sqlite3.connect(path).execute("SELECT count(*) FROM results").fetchone()
