"""Stage glue shared by the CLI and tests.

Each stage reads/writes JSON-lines records with sorted keys so the whole
pipeline is byte-deterministic for fixed inputs.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

from . import enrichment, geospatial, graph_builder, ingest
from .config import RunConfig
from .embedding import get_embedder

log = logging.getLogger(__name__)


def _dump_records(records: list[dict], path) -> int:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    return len(records)


def _record_values(rec: dict) -> dict:
    values = {k: v["value"] for k, v in rec.get("fields", {}).items()}
    values.update(rec.get("extra", {}))
    return values


def run_ingest(source, out_path, page_size: int = 50, offline: bool = False,
               schema_path=None) -> int:
    if schema_path is None:
        schema = ingest.load_default_schema()
    else:
        with open(schema_path, encoding="utf-8") as fh:
            schema = json.load(fh)["attributes"]
    pairs = ingest.fetch_dual_format(source, page_size=page_size, offline=offline)
    records = ingest.harmonize_corpus(pairs, schema)
    return ingest.write_jsonl(records, out_path)


def run_geo(in_path, out_path, boundaries_path=None,
            multinational: bool = False, point_buffer: float = 0.0) -> dict:
    bs = geospatial.load_boundaries(boundaries_path)
    records = list(ingest.read_jsonl(in_path))
    scopes: dict[str, int] = {}
    for rec in records:
        geom = geospatial.record_geometry(_record_values(rec), point_buffer)
        footprint = geospatial.classify_footprint(geom, bs, multinational)
        rec["footprint"] = footprint.to_json_dict()
        scopes[footprint.scope] = scopes.get(footprint.scope, 0) + 1
    count = _dump_records(records, out_path)
    return {"records": count, "scopes": scopes}


def _classification_text(values: dict) -> str:
    parts = []
    for key in ("title", "entry_title", "summary", "abstract"):
        val = values.get(key)
        if isinstance(val, str):
            parts.append(val)
    for key in ("science_keywords", "platforms", "instruments", "variables"):
        val = values.get(key)
        if isinstance(val, list):
            for item in val:
                if isinstance(item, str):
                    parts.append(item)
                elif isinstance(item, dict):
                    parts.extend(str(v) for v in item.values() if isinstance(v, str))
    return " ".join(parts)


def run_enrich(in_path, out_path, cesm_path=None, config: RunConfig | None = None) -> dict:
    config = config or RunConfig()
    res_config = enrichment.load_resolution_config(config.resolution_config_path)
    vocabulary = enrichment.load_climate_vocabulary(config.vocabulary_path)
    classifier = None
    if cesm_path is not None:
        catalog = enrichment.load_cesm_catalog(cesm_path)
        embedder = get_embedder(config.embedding_provider)
        classifier = enrichment.get_classifier(
            catalog, config.classifier_provider, embedder
        )
    records = list(ingest.read_jsonl(in_path))
    predicted = 0
    for rec in records:
        values = _record_values(rec)
        rec["resolution"] = enrichment.extract_resolution(values, res_config).to_json_dict()
        ngrams = enrichment.generate_ngrams(_classification_text(values))
        tokens = enrichment.filter_climate_tokens(ngrams, vocabulary)
        rec["climate_tokens"] = tokens
        if classifier is not None and tokens:
            name, confidence = classifier.classify(" ".join(tokens))
            rec["cesm_predictions"] = [{"name": name, "confidence": confidence}]
            predicted += 1
        else:
            rec["cesm_predictions"] = []
    count = _dump_records(records, out_path)
    return {"records": count, "predicted": predicted}


def run_build(in_path, out_dir, cesm_path, workflows_path=None,
              config: RunConfig | None = None) -> dict:
    config = config or RunConfig()
    records = list(ingest.read_jsonl(in_path))
    catalog = enrichment.load_cesm_catalog(cesm_path) if cesm_path else []
    workflows_path = workflows_path or config.workflows_path
    with open(workflows_path, encoding="utf-8") as fh:
        workflow_seed = json.load(fh)
    embedder = get_embedder(config.embedding_provider)
    nodes, refs = graph_builder.synthesize_nodes(
        records, catalog, workflow_seed, embedder,
        embed_cesm_variable=config.embed_cesm_variable,
    )
    clusters = (
        enrichment.cluster_variables(catalog, config.tau_desc, config.tau_name)
        if catalog else []
    )
    edges = graph_builder.synthesize_edges(
        nodes, refs, records, catalog, clusters,
        confidence_threshold=config.confidence_threshold,
    )
    problems = graph_builder.validate_graph(nodes, edges)
    if problems:
        raise graph_builder.GraphBuildError(
            f"{len(problems)} graph validation problems; first: {problems[0]}"
        )
    return graph_builder.emit_csv(nodes, edges, Path(out_dir))
