"""Deterministic dataset-discovery core.

Queries are routed to vector search (embedding-enabled labels) or text
search, candidate datasets are gathered directly or by reverse traversal
from matched satellite nodes, and multi-criteria constraints (temporal
interval overlap, spatial membership via Location hits, organization
match) filter the candidates. Results persist in a single-file SQLite
cache shared across sessions.
"""

from __future__ import annotations

import datetime
import json
import logging
import os
import sqlite3
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from . import kernels
from .graph_schema import ALL_LABELS, embedding_enabled_labels

log = logging.getLogger(__name__)

# reverse-traversal edge per satellite label
_LABEL_TO_DATASET_EDGE = {
    "DataCategory": "hasDataCategory",
    "DataFormat": "hasDataFormat",
    "CoordinateSystem": "usesCoordinateSystem",
    "Location": "hasLocation",
    "Station": "hasStation",
    "Organization": "hasOrganization",
    "Platform": "hasPlatform",
    "Consortium": "hasConsortium",
    "TemporalExtent": "hasTemporalExtent",
    "Variable": "hasVariable",
    "CESMVariable": "hasCESMVariable",
    "SpatialResolution": "hasSpatialResolution",
    "TemporalResolution": "hasTemporalResolution",
    "ProcessingLevel": "hasProcessingLevel",
    "Link": "hasLink",
    "Project": "hasProject",
    "ScienceKeyword": "hasScienceKeyword",
    "Contact": "hasContact",
}

DEFAULT_LOCATION_K = 10
DEFAULT_LOCATION_MIN_SCORE = 0.15


class DiscoveryError(Exception):
    pass


class RoutingError(DiscoveryError):
    pass


@dataclass
class DiscoveryQuery:
    text: str
    node_label: str = "DataCategory"
    k: int = 10
    temporal: Optional[dict] = None  # {"after": s} | {"before": s} | {"between": [a, b]}
    spatial_text: Optional[str] = None
    organization: Optional[str] = None

    def __post_init__(self):
        if self.k < 1:
            raise DiscoveryError("k must be >= 1")
        if self.temporal and "between" in self.temporal:
            a, b = self.temporal["between"]
            if parse_time(a, "between.start") > parse_time(b, "between.end", end=True):
                raise DiscoveryError("between requires start <= end")


@dataclass
class DiscoveryResult:
    dataset_id: str
    title: str
    score: float
    matched_constraints: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "dataset_id": self.dataset_id,
            "title": self.title,
            "score": self.score,
            "matched_constraints": self.matched_constraints,
            "provenance": self.provenance,
        }


# ---------------------------------------------------------------------------
# Routing and primitive searches
# ---------------------------------------------------------------------------

def route_search(node_label: str, embed_cesm_variable: bool = False) -> str:
    """'vector' for embedding-enabled labels, 'text' otherwise."""
    if node_label not in ALL_LABELS:
        raise RoutingError(
            f"unknown label {node_label!r}; valid labels: {sorted(ALL_LABELS)}"
        )
    enabled = embedding_enabled_labels(embed_cesm_variable)
    return "vector" if node_label in enabled else "text"


def topk_by_embedding(graph, query_vector, label: str, k: int) -> list[tuple[str, float]]:
    """Exact top-k of a label's embedded nodes by cosine similarity.

    Ties break by node id ascending. Labels without embeddings raise a
    routing error pointing at text search.
    """
    ids, matrix = graph.embedding_matrix(label)
    if not ids:
        raise RoutingError(
            f"label {label!r} carries no embeddings; use text_search instead"
        )
    idx, scores = kernels.cosine_topk(matrix, query_vector, k)
    return [(ids[i], float(s)) for i, s in zip(idx, scores)]


# ---------------------------------------------------------------------------
# Temporal interval logic
# ---------------------------------------------------------------------------

def parse_time(value, field_name: str, end: bool = False) -> datetime.date:
    """Parse an ISO-8601 date/datetime or bare year into a date.

    Bare years expand to Jan 1 (start side) or Dec 31 (end side).
    """
    if isinstance(value, (int, float)) or (
        isinstance(value, str) and value.strip().isdigit()
    ):
        year = int(value)
        return datetime.date(year, 12, 31) if end else datetime.date(year, 1, 1)
    if isinstance(value, str):
        text = value.strip().rstrip("Z")
        for parser in (datetime.date.fromisoformat,
                       lambda s: datetime.datetime.fromisoformat(s).date()):
            try:
                return parser(text)
            except ValueError:
                continue
    raise DiscoveryError(f"unparseable date in {field_name}: {value!r}")


def temporal_overlap(dataset_bounds: tuple, constraint: dict) -> bool:
    """Interval intersection between dataset coverage and a constraint.

    dataset_bounds is (start, end); an absent end is open-ended (+inf).
    """
    raw_start, raw_end = dataset_bounds
    start = parse_time(raw_start, "dataset.start") if raw_start else datetime.date.min
    end = parse_time(raw_end, "dataset.end", end=True) if raw_end else datetime.date.max
    if "after" in constraint:
        return end >= parse_time(constraint["after"], "after")
    if "before" in constraint:
        return start <= parse_time(constraint["before"], "before", end=True)
    if "between" in constraint:
        a, b = constraint["between"]
        return start <= parse_time(b, "between.end", end=True) and end >= parse_time(
            a, "between.start"
        )
    raise DiscoveryError(f"unknown temporal constraint {constraint!r}")


# ---------------------------------------------------------------------------
# Multi-criteria composition
# ---------------------------------------------------------------------------

def _dataset_bounds(graph, dataset_id: str):
    extents = graph.neighbors(dataset_id, "hasTemporalExtent", "out")
    if not extents:
        return None
    props = graph.nodes[extents[0]].properties
    return (props.get("start"), props.get("end"))


def _candidates_from_hits(graph, label: str, hits) -> dict[str, float]:
    """Dataset id -> inherited score (max over matched satellite nodes)."""
    if label == "Dataset":
        return {nid: score for nid, score in hits}
    edge = _LABEL_TO_DATASET_EDGE.get(label)
    if edge is None:
        return {}
    out: dict[str, float] = {}
    for nid, score in hits:
        for ds in graph.neighbors(nid, edge, "in"):
            if score > out.get(ds, float("-inf")):
                out[ds] = score
    return out


def multi_criteria_search(
    query: DiscoveryQuery,
    graph,
    embedder,
    embed_cesm_variable: bool = False,
    location_k: int = DEFAULT_LOCATION_K,
    location_min_score: float = DEFAULT_LOCATION_MIN_SCORE,
) -> list[DiscoveryResult]:
    """Routed primary search, then monotone constraint filtering.

    Scores are inherited from the primary match; every reported constraint
    holds on the graph. Zero candidates is an empty result, not an error.
    """
    plan = route_search(query.node_label, embed_cesm_variable)
    if plan == "vector":
        hits = topk_by_embedding(
            graph, embedder.embed_text(query.text), query.node_label, query.k
        )
    else:
        hits = graph.text_search(query.node_label, query.text, query.k)
    candidates = _candidates_from_hits(graph, query.node_label, hits)

    constraints: dict[str, object] = {}
    allowed_locations = None
    if query.spatial_text:
        loc_hits = topk_by_embedding(
            graph, embedder.embed_text(query.spatial_text), "Location", location_k
        )
        allowed_locations = {
            nid for nid, score in loc_hits if score >= location_min_score
        }
        constraints["spatial"] = query.spatial_text

    results = []
    for ds_id, score in candidates.items():
        matched = []
        if query.temporal:
            bounds = _dataset_bounds(graph, ds_id)
            if bounds is None or not temporal_overlap(bounds, query.temporal):
                continue
            matched.append({"temporal": query.temporal})
        if allowed_locations is not None:
            locs = set(graph.neighbors(ds_id, "hasLocation", "out"))
            if not locs & allowed_locations:
                continue
            matched.append({"spatial": query.spatial_text})
        if query.organization:
            wanted = query.organization.lower()
            org_names = [
                str(graph.nodes[org].properties.get("name", "")).lower()
                for org in graph.neighbors(ds_id, "hasOrganization", "out")
            ]
            if not any(wanted in name for name in org_names):
                continue
            matched.append({"organization": query.organization})
        title = str(graph.nodes[ds_id].properties.get("title", ""))
        results.append(
            DiscoveryResult(
                dataset_id=ds_id,
                title=title,
                score=score,
                matched_constraints=matched,
                provenance={
                    "query": query.text,
                    "label": query.node_label,
                    "plan": plan,
                    "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                },
            )
        )
    results.sort(key=lambda r: (-r.score, r.dataset_id))
    return results


def resolve_cesm_variables(graph, dataset_id: str) -> list[dict]:
    """Connected model variables with component and dataset temporal bounds."""
    if dataset_id not in graph.nodes:
        raise DiscoveryError(f"unknown dataset {dataset_id!r}")
    bounds = _dataset_bounds(graph, dataset_id)
    out = []
    for var_id in graph.neighbors(dataset_id, "hasCESMVariable", "out"):
        var = graph.nodes[var_id]
        comps = graph.neighbors(var_id, "belongsToComponent", "out")
        component = (
            graph.nodes[comps[0]].properties.get("name") if comps else None
        )
        out.append(
            {
                "name": var.properties.get("name"),
                "component": component,
                "temporal_bounds": list(bounds) if bounds else None,
            }
        )
    return out


# ---------------------------------------------------------------------------
# Persistent results cache
# ---------------------------------------------------------------------------

class ResultCache:
    """Append-only single-file store, deduped on (query_text, dataset_id).

    A corrupt file is moved aside to `<path>.corrupt` and the store is
    rebuilt empty.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._connect()

    def _connect(self):
        try:
            self._conn = sqlite3.connect(self.path)
            self._conn.execute(
                """
                CREATE TABLE IF NOT EXISTS results (
                    query_text TEXT NOT NULL,
                    dataset_id TEXT NOT NULL,
                    title TEXT,
                    score REAL,
                    constraints_json TEXT,
                    created_at REAL NOT NULL,
                    PRIMARY KEY (query_text, dataset_id)
                )
                """
            )
            self._conn.commit()
        except sqlite3.DatabaseError:
            backup = self.path.with_suffix(self.path.suffix + ".corrupt")
            log.warning("corrupt cache %s; backing up to %s", self.path, backup)
            try:
                self._conn.close()
            except Exception:
                pass
            os.replace(self.path, backup)
            self._conn = None
            self._connect()

    def persist(self, query_text: str, results: list[DiscoveryResult]):
        now = time.time()
        with self._conn:
            for res in results:
                self._conn.execute(
                    """
                    INSERT INTO results
                        (query_text, dataset_id, title, score, constraints_json, created_at)
                    VALUES (?, ?, ?, ?, ?, ?)
                    ON CONFLICT (query_text, dataset_id) DO UPDATE SET
                        title = excluded.title,
                        score = excluded.score,
                        constraints_json = excluded.constraints_json,
                        created_at = excluded.created_at
                    """,
                    (
                        query_text,
                        res.dataset_id,
                        res.title,
                        res.score,
                        json.dumps(res.matched_constraints, sort_keys=True),
                        now,
                    ),
                )

    def recall(self, query_text: str) -> list[dict]:
        rows = self._conn.execute(
            """
            SELECT dataset_id, title, score, constraints_json, created_at
            FROM results WHERE query_text = ?
            ORDER BY created_at DESC, dataset_id ASC
            """,
            (query_text,),
        ).fetchall()
        return [
            {
                "dataset_id": r[0],
                "title": r[1],
                "score": r[2],
                "constraints": json.loads(r[3]) if r[3] else [],
                "created_at": r[4],
            }
            for r in rows
        ]

    def close(self):
        if self._conn is not None:
            self._conn.close()
            self._conn = None
