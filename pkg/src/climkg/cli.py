"""climkg command line: ingest -> geo -> enrich -> build -> load -> search
-> acquire, plus eval-cluster.

Exit codes: 0 success, 1 usage, 2 validation failure, 3 runtime failure.
"""

from __future__ import annotations

import json
import logging
import sys

import click

from . import SCHEMA_VERSION, __version__
from .config import ConfigError, RunConfig, load_config

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3


def _emit(ctx, payload: dict, text: str):
    if ctx.obj.get("json"):
        click.echo(json.dumps(payload, sort_keys=True))
    else:
        click.echo(text)


def _load_run_config(config_path, **overrides) -> RunConfig:
    return load_config(config_path, overrides)


@click.group()
@click.option("--json", "json_output", is_flag=True, help="machine-readable output")
@click.option("--verbose", is_flag=True, help="debug logging")
@click.version_option(__version__, message=f"climkg %(version)s (schema {SCHEMA_VERSION})")
@click.pass_context
def cli(ctx, json_output, verbose):
    ctx.ensure_object(dict)
    ctx.obj["json"] = json_output
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


@cli.command()
@click.option("--source", required=True, help="endpoint base URL or fixture directory")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--page-size", default=50, show_default=True, type=int)
@click.option("--offline", is_flag=True, help="forbid network access")
@click.option("--schema", "schema_path", type=click.Path(exists=True), default=None)
@click.pass_context
def ingest(ctx, source, out_path, page_size, offline, schema_path):
    """Fetch dual-format records and write harmonized JSON-lines."""
    from .pipeline import run_ingest

    count = run_ingest(source, out_path, page_size=page_size, offline=offline,
                       schema_path=schema_path)
    _emit(ctx, {"records": count, "out": out_path},
          f"harmonized {count} records -> {out_path}")


@cli.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--boundaries", "boundaries_path", type=click.Path(exists=True),
              default=None, help="world boundary GeoJSON (default: packaged fixture)")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--multinational", is_flag=True,
              help="label >=4-country single-continent footprints multinational")
@click.pass_context
def geo(ctx, in_path, boundaries_path, out_path, multinational):
    """Standardize geometry and classify geographic scope."""
    from .pipeline import run_geo

    summary = run_geo(in_path, out_path, boundaries_path, multinational)
    _emit(ctx, summary,
          f"classified {summary['records']} records -> {out_path} "
          f"(scopes: {summary['scopes']})")


@cli.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--cesm", "cesm_path", type=click.Path(exists=True), default=None,
              help="variable catalog CSV (name,description,component,units)")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.pass_context
def enrich(ctx, in_path, cesm_path, out_path, config_path):
    """Extract resolution, n-gram evidence, and variable predictions."""
    from .pipeline import run_enrich

    config = _load_run_config(config_path)
    summary = run_enrich(in_path, out_path, cesm_path, config)
    _emit(ctx, summary,
          f"enriched {summary['records']} records -> {out_path}")


@cli.command()
@click.option("--in", "in_path", required=True, type=click.Path(exists=True))
@click.option("--cesm", "cesm_path", type=click.Path(exists=True), default=None)
@click.option("--workflows", "workflows_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.pass_context
def build(ctx, in_path, cesm_path, workflows_path, out_dir, config_path):
    """Materialize nodes/edges and emit bulk-load CSVs with a manifest."""
    from .pipeline import run_build

    config = _load_run_config(config_path)
    manifest = run_build(in_path, out_dir, cesm_path, workflows_path, config)
    _emit(ctx, manifest,
          f"built graph: {manifest['node_count']} nodes, "
          f"{manifest['edge_count']} edges, {len(manifest['files'])} files -> {out_dir}")


@cli.command()
@click.option("--graph", "graph_dir", required=True, type=click.Path(exists=True))
@click.option("--check", is_flag=True, help="verify and report counts only")
@click.pass_context
def load(ctx, graph_dir, check):
    """Load bulk CSVs into memory, verifying manifest checksums."""
    from .graph_store import load_csv

    graph = load_csv(graph_dir)
    payload = {
        "nodes": len(graph.nodes),
        "edges": len(graph.edges),
        "labels": graph.labels(),
    }
    _emit(ctx, payload,
          f"loaded {payload['nodes']} nodes / {payload['edges']} edges "
          f"({len(payload['labels'])} labels)")


@cli.command()
@click.option("--graph", "graph_dir", required=True, type=click.Path(exists=True))
@click.option("--query", required=True)
@click.option("--label", default="DataCategory", show_default=True)
@click.option("-k", default=10, show_default=True, type=int)
@click.option("--after", default=None, help="temporal constraint (YYYY or ISO date)")
@click.option("--before", default=None)
@click.option("--place", default=None, help="spatial place query")
@click.option("--org", default=None, help="organization name filter")
@click.option("--cache", "cache_path", type=click.Path(), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.pass_context
def search(ctx, graph_dir, query, label, k, after, before, place, org,
           cache_path, config_path):
    """Semantic + multi-criteria dataset discovery; JSON-lines output."""
    from .discovery import DiscoveryQuery, ResultCache, multi_criteria_search
    from .embedding import get_embedder
    from .graph_store import load_csv

    config = _load_run_config(config_path)
    temporal = None
    if after and before:
        temporal = {"between": [after, before]}
    elif after:
        temporal = {"after": after}
    elif before:
        temporal = {"before": before}
    dq = DiscoveryQuery(
        text=query, node_label=label, k=k, temporal=temporal,
        spatial_text=place, organization=org,
    )
    graph = load_csv(graph_dir)
    embedder = get_embedder(config.embedding_provider)
    results = multi_criteria_search(
        dq, graph, embedder,
        embed_cesm_variable=config.embed_cesm_variable,
        location_k=config.location_k,
        location_min_score=config.location_min_score,
    )
    if cache_path:
        cache = ResultCache(cache_path)
        cache.persist(query, results)
        cache.close()
    for res in results:
        click.echo(json.dumps(res.to_json_dict(), sort_keys=True))


@cli.command()
@click.option("--graph", "graph_dir", required=True, type=click.Path(exists=True))
@click.option("--dataset", "dataset_id", required=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--check-only", is_flag=True, help="validate links without downloading")
@click.pass_context
def acquire(ctx, graph_dir, dataset_id, out_dir, check_only):
    """Retrieve, normalize, validate, and summarize one dataset."""
    from .acquisition import run_pipeline
    from .graph_store import load_csv

    graph = load_csv(graph_dir)
    state = run_pipeline(graph, dataset_id, out_dir, check_only=check_only)
    payload = {
        "dataset_id": state.dataset_id,
        "status": state.status,
        "validation": state.validation,
        "V": state.v,
        "normalized": state.normalized_path,
        "diagnostics": state.diagnostics,
    }
    _emit(ctx, payload,
          f"{dataset_id}: status={state.status} V={state.v}")
    if state.status == "failed":
        sys.exit(EXIT_VALIDATION)


@cli.command("eval-cluster")
@click.option("--pred", "pred_path", required=True, type=click.Path(exists=True),
              help="CSV with columns id,name")
@click.option("--truth", "truth_path", required=True, type=click.Path(exists=True))
@click.option("--cesm", "cesm_path", required=True, type=click.Path(exists=True))
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.pass_context
def eval_cluster(ctx, pred_path, truth_path, cesm_path, config_path):
    """Exact vs similarity-group accuracy for variable predictions."""
    import csv as _csv

    from .enrichment import cluster_variables, evaluate_predictions, load_cesm_catalog

    def read_map(path):
        with open(path, newline="", encoding="utf-8") as fh:
            return {row["id"]: row["name"] for row in _csv.DictReader(fh)}

    config = _load_run_config(config_path)
    catalog = load_cesm_catalog(cesm_path)
    clusters = cluster_variables(catalog, config.tau_desc, config.tau_name)
    result = evaluate_predictions(read_map(pred_path), read_map(truth_path), clusters)
    payload = {
        "exact_accuracy": result.exact_accuracy,
        "group_accuracy": result.group_accuracy,
        "error_reduction": result.error_reduction,
        "unmatched": result.unmatched,
    }
    _emit(ctx, payload,
          f"exact={result.exact_accuracy:.4f} group={result.group_accuracy:.4f} "
          f"error_reduction={result.error_reduction:.3f} unmatched={result.unmatched}")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False, obj={})
        return EXIT_OK
    except SystemExit as exc:
        return int(exc.code or 0)
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except (ConfigError, FileNotFoundError, ValueError, KeyError) as exc:
        click.echo(f"validation error: {exc}", err=True)
        return EXIT_VALIDATION
    except click.Abort:
        return EXIT_RUNTIME
    except Exception as exc:  # pragma: no cover - last resort
        log.exception("runtime failure")
        click.echo(f"runtime error: {exc}", err=True)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
