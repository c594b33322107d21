"""In-memory property graph loaded from bulk CSVs.

The store verifies manifest checksums before loading, rebuilds typed
properties, and serves label lookups, typed adjacency in both directions,
token-overlap text search, and per-label embedding matrices for vector
search. The graph is immutable after load.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import re
from pathlib import Path

import numpy as np

from .graph_builder import GraphEdge, GraphNode

log = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[a-z0-9]+")

# properties consulted by text search, in priority order
_TEXT_PROPS = ("name", "title", "text", "path", "url")


class GraphLoadError(Exception):
    pass


def _parse_value(cell: str, col_type: str):
    if cell == "":
        return None
    if col_type == "Float":
        return float(cell)
    if col_type == "Int":
        return int(cell)
    if col_type == "Boolean":
        return cell == "true"
    if col_type == "String[]":
        return cell.split(";")
    return cell


class PropertyGraph:
    def __init__(self):
        self.nodes: dict[str, GraphNode] = {}
        self.by_label: dict[str, list[str]] = {}
        self.edges: list[GraphEdge] = []
        self._out: dict[tuple[str, str], list[str]] = {}
        self._in: dict[tuple[str, str], list[str]] = {}
        self._out_edges: dict[tuple[str, str], list[GraphEdge]] = {}
        self._vector_cache: dict[str, tuple[list[str], np.ndarray]] = {}

    # -- construction -------------------------------------------------------

    def add_node(self, node: GraphNode):
        self.nodes[node.id] = node
        self.by_label.setdefault(node.label, []).append(node.id)

    def add_edge(self, edge: GraphEdge):
        self.edges.append(edge)
        self._out.setdefault((edge.start_id, edge.type), []).append(edge.end_id)
        self._in.setdefault((edge.end_id, edge.type), []).append(edge.start_id)
        self._out_edges.setdefault((edge.start_id, edge.type), []).append(edge)

    def finalize(self):
        for ids in self.by_label.values():
            ids.sort()
        for adj in (self._out, self._in):
            for targets in adj.values():
                targets.sort()

    # -- queries ------------------------------------------------------------

    def neighbors(self, node_id: str, edge_type: str, direction: str = "out") -> list[str]:
        """Adjacent node ids over one edge type; stable order by id."""
        if node_id not in self.nodes:
            raise KeyError(f"unknown node id {node_id!r}")
        if direction == "out":
            return list(self._out.get((node_id, edge_type), []))
        if direction == "in":
            return list(self._in.get((node_id, edge_type), []))
        raise ValueError(f"direction must be 'out' or 'in', got {direction!r}")

    def out_edges(self, node_id: str, edge_type: str) -> list[GraphEdge]:
        return list(self._out_edges.get((node_id, edge_type), []))

    def labels(self) -> list[str]:
        return sorted(self.by_label)

    def node_text(self, node_id: str) -> str:
        props = self.nodes[node_id].properties
        parts = [str(props[k]) for k in _TEXT_PROPS if k in props]
        return " ".join(parts)

    def text_search(self, label: str, query: str, limit: int = 10) -> list[tuple[str, float]]:
        """Jaccard token overlap against name/title-like properties.

        Returns (node id, score) pairs, score desc then id asc, zero-score
        nodes omitted.
        """
        q_tokens = set(_TOKEN_RE.findall(query.lower()))
        if not q_tokens:
            return []
        scored = []
        for nid in self.by_label.get(label, []):
            tokens = set(_TOKEN_RE.findall(self.node_text(nid).lower()))
            if not tokens:
                continue
            inter = len(q_tokens & tokens)
            if inter == 0:
                continue
            scored.append((nid, inter / len(q_tokens | tokens)))
        scored.sort(key=lambda pair: (-pair[1], pair[0]))
        return scored[:limit]

    def embedding_matrix(self, label: str) -> tuple[list[str], np.ndarray]:
        """(ids, matrix) for the embedding-bearing nodes of a label."""
        if label not in self._vector_cache:
            ids = [
                nid for nid in self.by_label.get(label, [])
                if self.nodes[nid].embedding is not None
            ]
            matrix = (
                np.array([self.nodes[nid].embedding for nid in ids])
                if ids else np.zeros((0, 0))
            )
            self._vector_cache[label] = (ids, matrix)
        return self._vector_cache[label]

    def embedded_labels(self) -> frozenset:
        return frozenset(
            label for label, ids in self.by_label.items()
            if any(self.nodes[nid].embedding is not None for nid in ids)
        )


def load_csv(graph_dir) -> PropertyGraph:
    """Load a bulk-CSV directory, verifying manifest checksums first."""
    graph_dir = Path(graph_dir)
    manifest_path = graph_dir / "manifest.json"
    if not manifest_path.exists():
        raise GraphLoadError(f"no manifest.json in {graph_dir}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))

    for entry in manifest["files"]:
        path = graph_dir / entry["name"]
        if not path.exists():
            raise GraphLoadError(f"manifest file missing: {entry['name']}")
        digest = hashlib.sha256(path.read_bytes()).hexdigest()
        if digest != entry["sha256"]:
            raise GraphLoadError(
                f"checksum mismatch for {entry['name']}: refusing to load"
            )

    graph = PropertyGraph()
    for entry in manifest["files"]:
        path = graph_dir / entry["name"]
        if entry["name"].startswith("nodes_"):
            _load_node_file(graph, path)
        elif entry["name"].startswith("edges_"):
            _load_edge_file(graph, path)
        else:
            raise GraphLoadError(f"unrecognized manifest file {entry['name']}")

    if len(graph.nodes) != manifest["node_count"]:
        raise GraphLoadError(
            f"node count {len(graph.nodes)} != manifest {manifest['node_count']}"
        )
    if len(graph.edges) != manifest["edge_count"]:
        raise GraphLoadError(
            f"edge count {len(graph.edges)} != manifest {manifest['edge_count']}"
        )
    graph.finalize()
    return graph


def _split_header(header: list[str]):
    cols = []
    for token in header:
        if token in (":ID", ":LABEL", ":START_ID", ":END_ID", ":TYPE"):
            cols.append((token, None))
        else:
            name, _, col_type = token.rpartition(":")
            cols.append((name, col_type or "String"))
    return cols


def _load_node_file(graph: PropertyGraph, path: Path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != ":ID":
            raise GraphLoadError(f"{path.name}: bad header")
        cols = _split_header(header)
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(cols):
                raise GraphLoadError(
                    f"{path.name}:{lineno}: {len(row)} cells, expected {len(cols)}"
                )
            nid = label = None
            props = {}
            embedding = None
            for (name, col_type), cell in zip(cols, row):
                if name == ":ID":
                    nid = cell
                elif name == ":LABEL":
                    label = cell
                elif name == "embedding":
                    if cell:
                        embedding = np.array([float(x) for x in cell.split(";")])
                else:
                    value = _parse_value(cell, col_type)
                    if value is not None:
                        props[name] = value
            if not nid or not label:
                raise GraphLoadError(f"{path.name}:{lineno}: missing id or label")
            graph.add_node(GraphNode(nid, label, props, embedding))


def _load_edge_file(graph: PropertyGraph, path: Path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != ":START_ID":
            raise GraphLoadError(f"{path.name}: bad header")
        cols = _split_header(header)
        for lineno, row in enumerate(reader, start=2):
            if len(row) != len(cols):
                raise GraphLoadError(
                    f"{path.name}:{lineno}: {len(row)} cells, expected {len(cols)}"
                )
            start = end = etype = None
            props = {}
            for (name, col_type), cell in zip(cols, row):
                if name == ":START_ID":
                    start = cell
                elif name == ":END_ID":
                    end = cell
                elif name == ":TYPE":
                    etype = cell
                else:
                    value = _parse_value(cell, col_type)
                    if value is not None:
                        props[name] = value
            if not start or not end or not etype:
                raise GraphLoadError(f"{path.name}:{lineno}: incomplete edge")
            graph.add_edge(GraphEdge(start, end, etype, props))
