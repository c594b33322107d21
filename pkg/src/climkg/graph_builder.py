"""Node/edge synthesis and bulk-load CSV emission.

Every node id is a deterministic content hash of its label and natural
key, so rebuilding from the same inputs yields identical ids, files, and
checksums. Emission is one CSV per node label and per edge type, rows
sorted by id, with a manifest carrying row counts and SHA-256 checksums.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from . import SCHEMA_VERSION
from .graph_schema import (
    ALL_LABELS,
    EDGE_TYPES,
    WORKFLOW_LABELS,
    edge_schema_legal,
    embedding_enabled_labels,
)

log = logging.getLogger(__name__)

_UNIT_SEP = "\x1f"

DEFAULT_CONFIDENCE_THRESHOLD = 0.5


class GraphBuildError(Exception):
    pass


def node_id(label: str, natural_key: dict) -> str:
    """First 16 hex chars of SHA-256 over the canonical (label, key) form.

    Key values are whitespace-trimmed and lowercased before hashing, so
    case and surrounding-space variants collapse to one node.
    """
    if label not in ALL_LABELS:
        raise GraphBuildError(f"unknown node label {label!r}")
    items = [
        (k, str(v).strip().lower())
        for k, v in sorted(natural_key.items())
        if str(v).strip()
    ]
    if not items:
        raise GraphBuildError(f"empty natural key for label {label}")
    payload = label + _UNIT_SEP + _UNIT_SEP.join(f"{k}={v}" for k, v in items)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


@dataclass
class GraphNode:
    id: str
    label: str
    properties: dict
    embedding: Optional[np.ndarray] = None


@dataclass
class GraphEdge:
    start_id: str
    end_id: str
    type: str
    properties: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Field coercion helpers
# ---------------------------------------------------------------------------

def _name_of(item) -> Optional[str]:
    if isinstance(item, str):
        return item.strip() or None
    if isinstance(item, dict):
        for key in ("short_name", "ShortName", "name", "Name", "title"):
            if key in item and str(item[key]).strip():
                return str(item[key]).strip()
    return None


def _str_list(value) -> list[str]:
    if value is None:
        return []
    if isinstance(value, str):
        return [value.strip()] if value.strip() else []
    if isinstance(value, (list, tuple)):
        out = []
        for item in value:
            name = _name_of(item)
            if name:
                out.append(name)
        return out
    return []


def _field(rec: dict, name: str, default=None):
    entry = rec.get("fields", {}).get(name)
    if entry is not None:
        return entry.get("value", default)
    return rec.get("extra", {}).get(name, default)


# ---------------------------------------------------------------------------
# Node synthesis
# ---------------------------------------------------------------------------

class NodeCollector:
    """Deduplicates nodes by id; remembers each record's satellite nodes."""

    def __init__(self, embedder, embed_labels: frozenset):
        self.embedder = embedder
        self.embed_labels = embed_labels
        self.nodes: dict[str, GraphNode] = {}

    def add(self, label: str, natural_key: dict, properties: dict,
            embed_text: Optional[str] = None) -> str:
        nid = node_id(label, natural_key)
        if nid not in self.nodes:
            embedding = None
            if label in self.embed_labels:
                embedding = self.embedder.embed_text(embed_text or "")
            # empty values would not survive a CSV round trip; drop them
            props = {k: v for k, v in properties.items() if v not in ("", None, [])}
            self.nodes[nid] = GraphNode(nid, label, props, embedding)
        return nid


def synthesize_nodes(
    records: Iterable[dict],
    catalog,
    workflow_seed: list[dict],
    embedder,
    embed_cesm_variable: bool = False,
):
    """Materialize all nodes from enriched records, the variable catalog,
    and the workflow seed. Returns (nodes_by_id, per_record_refs) where
    per_record_refs maps concept_id -> {role: [node ids]} for edge synthesis.
    """
    embed_labels = embedding_enabled_labels(embed_cesm_variable)
    coll = NodeCollector(embedder, embed_labels)
    refs: dict[str, dict[str, list[str]]] = {}

    for rec in records:
        cid = rec.get("concept_id")
        if not cid:
            log.warning("record without concept_id skipped")
            continue
        r: dict[str, list[str]] = {}

        title = _field(rec, "title") or _field(rec, "entry_title") or ""
        ds_props = {"concept_id": cid, "title": title}
        for key in ("short_name", "version_id", "doi"):
            val = _field(rec, key)
            if isinstance(val, str) and val:
                ds_props[key] = val
        footprint = rec.get("footprint") or {}
        if footprint.get("scope"):
            ds_props["scope"] = footprint["scope"]
        ds_id = coll.add("Dataset", {"concept_id": cid}, ds_props)
        r["dataset"] = [ds_id]

        summary = _field(rec, "summary") or _field(rec, "abstract")
        if isinstance(summary, str) and summary.strip():
            r["DataCategory"] = [
                coll.add("DataCategory", {"text": summary},
                         {"text": summary}, embed_text=summary)
            ]

        for role, attr in (("DataFormat", "data_format"),
                           ("CoordinateSystem", "coordinate_system"),
                           ("Station", "stations"),
                           ("Consortium", "consortiums"),
                           ("Project", "projects")):
            ids = [
                coll.add(role, {"name": name}, {"name": name})
                for name in _str_list(_field(rec, attr))
            ]
            if ids:
                r[role] = ids

        orgs = []
        for attr in ("data_center", "archive_center", "organizations"):
            orgs.extend(_str_list(_field(rec, attr)))
        org_ids = []
        for name in dict.fromkeys(orgs):
            org_ids.append(coll.add("Organization", {"name": name}, {"name": name}))
        if org_ids:
            r["Organization"] = org_ids

        plat_ids = [
            coll.add("Platform", {"name": name}, {"name": name})
            for name in dict.fromkeys(_str_list(_field(rec, "platforms")))
        ]
        if plat_ids:
            r["Platform"] = plat_ids

        if footprint.get("wkt"):
            places = _str_list(_field(rec, "spatial_keywords")) + _str_list(
                _field(rec, "place_names")
            )
            countries = footprint.get("countries", [])
            continents = footprint.get("continents", [])
            geom_hash = hashlib.sha256(
                footprint["wkt"].encode("utf-8")
            ).hexdigest()[:16]
            loc_text = " ".join(
                places + list(countries) + list(continents) + [footprint.get("scope", "")]
            )
            loc_props = {
                "wkt": footprint["wkt"],
                "place_names": places,
                "countries": list(countries),
                "continents": list(continents),
                "scope": footprint.get("scope", "unclassified"),
            }
            r["Location"] = [
                coll.add("Location", {"geometry": geom_hash}, loc_props,
                         embed_text=loc_text)
            ]

        start = _field(rec, "time_start")
        end = _field(rec, "time_end")
        if start or end:
            te_props = {"start": start or "", "end": end or ""}
            updated = _field(rec, "updated")
            if isinstance(updated, str) and updated:
                te_props["updated"] = updated
            r["TemporalExtent"] = [
                coll.add("TemporalExtent",
                         {"start": start or "", "end": end or "open"}, te_props)
            ]

        var_ids = []
        variables = _field(rec, "variables") or []
        if isinstance(variables, (str, dict)):
            variables = [variables]
        for item in variables:
            name = _name_of(item)
            if not name:
                continue
            units = item.get("units", "") if isinstance(item, dict) else ""
            desc = item.get("description", "") if isinstance(item, dict) else ""
            var_ids.append(
                coll.add(
                    "Variable",
                    {"dataset": cid, "name": name, "units": units},
                    {"name": name, "units": units, "description": desc},
                    embed_text=f"{name} {desc}".strip(),
                )
            )
        if var_ids:
            r["Variable"] = var_ids

        resolution = rec.get("resolution") or {}
        for role, key in (("SpatialResolution", "spatial_sentences"),
                          ("TemporalResolution", "temporal_sentences")):
            ids = [
                coll.add(role, {"text": sent}, {"text": sent}, embed_text=sent)
                for sent in resolution.get(key, [])
            ]
            if ids:
                r[role] = ids

        kw_ids = []
        keywords = _field(rec, "science_keywords") or []
        if isinstance(keywords, str):
            keywords = [keywords]
        for kw in keywords:
            path = kw if isinstance(kw, str) else " > ".join(
                str(v) for v in kw.values() if v
            )
            path = path.strip()
            if path:
                kw_ids.append(
                    coll.add("ScienceKeyword", {"path": path},
                             {"path": path}, embed_text=path)
                )
        if kw_ids:
            r["ScienceKeyword"] = kw_ids

        level = _field(rec, "processing_level_id")
        if level is not None and str(level).strip():
            r["ProcessingLevel"] = [
                coll.add("ProcessingLevel", {"level": str(level)},
                         {"level": str(level)})
            ]

        link_ids = []
        links = _field(rec, "links") or []
        if isinstance(links, (str, dict)):
            links = [links]
        for item in links:
            if isinstance(item, str):
                url, kind = item.strip(), "unknown"
            elif isinstance(item, dict):
                url = str(item.get("href") or item.get("url") or "").strip()
                kind = str(item.get("kind") or item.get("rel") or "unknown")
            else:
                continue
            if url:
                link_ids.append(
                    coll.add("Link", {"url": url}, {"url": url, "kind": kind})
                )
        if link_ids:
            r["Link"] = link_ids

        contact_ids = []
        contacts = []
        for attr in ("contacts", "contact_persons", "contact_groups"):
            val = _field(rec, attr) or []
            contacts.extend(val if isinstance(val, list) else [val])
        for item in contacts:
            name = _name_of(item)
            if not name:
                continue
            props = {"name": name}
            if isinstance(item, dict) and item.get("email"):
                props["email"] = str(item["email"])
            contact_ids.append(coll.add("Contact", {"name": name}, props))
        if contact_ids:
            r["Contact"] = contact_ids

        refs[cid] = r

    for var in catalog:
        coll.add(
            "CESMVariable",
            {"name": var.name},
            {
                "name": var.name,
                "description": var.description,
                "component": var.component,
                "units": var.units,
            },
            embed_text=f"{var.name} {var.description}".strip(),
        )
    for comp in sorted({var.component for var in catalog}):
        coll.add("Component", {"name": comp}, {"name": comp})

    for wf in workflow_seed:
        label = wf["label"]
        if label not in WORKFLOW_LABELS:
            raise GraphBuildError(f"unknown workflow label {label!r}")
        coll.add(
            label,
            {"name": wf["name"]},
            {"name": wf["name"], "description": wf.get("description", "")},
            embed_text=f"{wf['name']} {wf.get('description', '')}".strip(),
        )

    return coll.nodes, refs


# ---------------------------------------------------------------------------
# Edge synthesis
# ---------------------------------------------------------------------------

_RECORD_EDGE_ROLES = {
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
    "SpatialResolution": "hasSpatialResolution",
    "TemporalResolution": "hasTemporalResolution",
    "ProcessingLevel": "hasProcessingLevel",
    "Link": "hasLink",
    "Project": "hasProject",
    "ScienceKeyword": "hasScienceKeyword",
    "Contact": "hasContact",
}


def synthesize_edges(
    nodes: dict,
    refs: dict,
    records: Iterable[dict],
    catalog,
    clusters,
    confidence_threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> list[GraphEdge]:
    """Structural edges from record fields, classifier-driven variable
    links above the confidence threshold, and similarity cliques within
    clusters. Edges referencing a missing endpoint are dropped with a
    diagnostic, never emitted.
    """
    edges: dict[tuple, GraphEdge] = {}

    def emit(start_id, edge_type, end_id, properties=None):
        if start_id not in nodes or end_id not in nodes:
            log.warning("dangling endpoint on %s edge dropped", edge_type)
            return
        if not edge_schema_legal(nodes[start_id].label, edge_type, nodes[end_id].label):
            log.warning(
                "schema-illegal edge dropped: (%s)-[%s]->(%s)",
                nodes[start_id].label, edge_type, nodes[end_id].label,
            )
            return
        key = (start_id, edge_type, end_id)
        if key in edges:
            old = edges[key].properties
            new = properties or {}
            if "confidence" in new and new["confidence"] > old.get("confidence", -1.0):
                old["confidence"] = new["confidence"]
            return
        edges[key] = GraphEdge(start_id, end_id, edge_type, dict(properties or {}))

    cesm_by_name = {
        n.properties.get("name"): nid
        for nid, n in nodes.items()
        if n.label == "CESMVariable"
    }
    comp_by_name = {
        n.properties.get("name"): nid
        for nid, n in nodes.items()
        if n.label == "Component"
    }

    for rec in records:
        cid = rec.get("concept_id")
        r = refs.get(cid)
        if not r:
            continue
        ds_id = r["dataset"][0]
        for role, edge_type in _RECORD_EDGE_ROLES.items():
            for target in r.get(role, []):
                emit(ds_id, edge_type, target)

        predicted = []
        for pred in rec.get("cesm_predictions", []):
            name = pred.get("name")
            conf = float(pred.get("confidence", 0.0))
            if name in cesm_by_name and conf >= confidence_threshold:
                emit(ds_id, "hasCESMVariable", cesm_by_name[name],
                     {"confidence": conf})
                predicted.append(cesm_by_name[name])

        # semantic bridge: record keywords describe its predicted variables
        for kw_id in r.get("ScienceKeyword", []):
            for var_id in predicted:
                emit(kw_id, "describesVariable", var_id)
        for plat_id in r.get("Platform", []):
            for loc_id in r.get("Location", []):
                emit(plat_id, "operatesAtLocation", loc_id)
        for contact_id in r.get("Contact", []):
            for org_id in r.get("Organization", []):
                emit(contact_id, "worksForOrganization", org_id)
        for org_id in r.get("Organization", []):
            for cons_id in r.get("Consortium", []):
                emit(org_id, "belongsToConsortium", cons_id)

    for var in catalog:
        vid = cesm_by_name.get(var.name)
        comp_id = comp_by_name.get(var.component)
        if vid and comp_id:
            emit(vid, "belongsToComponent", comp_id)

    for cluster in clusters:
        members = sorted(m for m in cluster.members if m in cesm_by_name)
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                emit(cesm_by_name[a], "similarCESMVariables", cesm_by_name[b])

    return sorted(edges.values(), key=lambda e: (e.type, e.start_id, e.end_id))


def validate_graph(nodes: dict, edges: list) -> list[str]:
    """Referential-integrity and schema-closure diagnostics (empty = valid)."""
    problems = []
    for nid, node in nodes.items():
        if node.label not in ALL_LABELS:
            problems.append(f"node {nid}: label {node.label!r} outside vocabulary")
    for edge in edges:
        if edge.start_id not in nodes or edge.end_id not in nodes:
            problems.append(f"edge {edge.type}: dangling endpoint")
            continue
        if edge.type not in EDGE_TYPES:
            problems.append(f"edge type {edge.type!r} outside vocabulary")
            continue
        if not edge_schema_legal(
            nodes[edge.start_id].label, edge.type, nodes[edge.end_id].label
        ):
            problems.append(
                f"edge {edge.type}: illegal endpoints "
                f"({nodes[edge.start_id].label} -> {nodes[edge.end_id].label})"
            )
    return problems


# ---------------------------------------------------------------------------
# CSV emission
# ---------------------------------------------------------------------------

def _column_type(values) -> str:
    kinds = {type(v) for v in values if v is not None}
    if kinds <= {bool}:
        return "Boolean"
    if kinds <= {int, bool}:
        return "Int"
    if kinds <= {float, int, bool}:
        return "Float"
    if kinds <= {list}:
        return "String[]"
    return "String"


def _format_value(value, col_type: str) -> str:
    if value is None:
        return ""
    if col_type == "String[]":
        return ";".join(str(v) for v in value)
    if col_type == "Float":
        return repr(float(value))
    if col_type == "Int":
        return str(int(value))
    if col_type == "Boolean":
        return "true" if value else "false"
    return str(value)


def _format_embedding(vec: np.ndarray) -> str:
    return ";".join(repr(float(x)) for x in vec)


def emit_csv(nodes: dict, edges: list, out_dir) -> dict:
    """Write nodes_<Label>.csv / edges_<type>.csv plus manifest.json.

    Rows are sorted by id for byte-stable output; the manifest lists each
    file with its row count and SHA-256.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest_files = []

    by_label: dict[str, list[GraphNode]] = {}
    for node in nodes.values():
        by_label.setdefault(node.label, []).append(node)

    for label in sorted(by_label):
        rows = sorted(by_label[label], key=lambda n: n.id)
        prop_keys = sorted({k for n in rows for k in n.properties})
        col_types = {
            k: _column_type([n.properties.get(k) for n in rows]) for k in prop_keys
        }
        has_embedding = any(n.embedding is not None for n in rows)
        header = [":ID", ":LABEL"]
        header += [f"{k}:{col_types[k]}" for k in prop_keys]
        if has_embedding:
            header.append("embedding:Float[]")
        path = out_dir / f"nodes_{label}.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for node in rows:
                row = [node.id, label]
                row += [
                    _format_value(node.properties.get(k), col_types[k])
                    for k in prop_keys
                ]
                if has_embedding:
                    row.append(
                        _format_embedding(node.embedding)
                        if node.embedding is not None else ""
                    )
                writer.writerow(row)
        manifest_files.append(_manifest_entry(path, len(rows)))

    by_type: dict[str, list[GraphEdge]] = {}
    for edge in edges:
        by_type.setdefault(edge.type, []).append(edge)

    for edge_type in sorted(by_type):
        rows = sorted(by_type[edge_type], key=lambda e: (e.start_id, e.end_id))
        prop_keys = sorted({k for e in rows for k in e.properties})
        col_types = {
            k: _column_type([e.properties.get(k) for e in rows]) for k in prop_keys
        }
        header = [":START_ID", ":END_ID", ":TYPE"]
        header += [f"{k}:{col_types[k]}" for k in prop_keys]
        path = out_dir / f"edges_{edge_type}.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for edge in rows:
                row = [edge.start_id, edge.end_id, edge_type]
                row += [
                    _format_value(edge.properties.get(k), col_types[k])
                    for k in prop_keys
                ]
                writer.writerow(row)
        manifest_files.append(_manifest_entry(path, len(rows)))

    manifest = {
        "schema_version": SCHEMA_VERSION,
        "node_count": len(nodes),
        "edge_count": len(edges),
        "files": sorted(manifest_files, key=lambda f: f["name"]),
    }
    with open(out_dir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
        fh.write("\n")
    return manifest


def _manifest_entry(path: Path, rows: int) -> dict:
    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    return {"name": path.name, "rows": rows, "sha256": digest}
