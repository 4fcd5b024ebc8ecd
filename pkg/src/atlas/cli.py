"""Command-line entry point sequencing all pipeline stages.

Stages communicate exclusively through files, so each subcommand can be run
(and re-run) in isolation: ingest -> filter -> extract -> merge -> cluster ->
build-graph -> analyze -> serve.  All outputs are canonical, so re-running a
stage on unchanged inputs reproduces its output byte for byte.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import corpus as corpus_mod
from .canonical import dump_json, load_json, read_jsonl, sha256_file, write_jsonl
from .config import AtlasConfig, load_config
from .extraction import RawTriplet, run_extraction
from .graph import build_graph, export_graph, load_graph
from .netanalysis import analyze_graph, export_analysis, render_tables
from .providers import (
    HttpProvider,
    Provider,
    RecordingProvider,
    ReplayCache,
    ReplayProvider,
    load_scripted_provider,
)
from .notation import format_key
from .semantics import (
    ThematicCluster,
    apply_merge,
    build_merge_map,
    build_thematic_clusters,
    collect_keys,
    embed_keys,
    load_vectors,
    name_cluster,
    save_vectors,
)
from .service import SnapshotPaths, create_app


def _build_provider(config: AtlasConfig, cache: ReplayCache, mode: str | None) -> Provider:
    mode = mode or config.provider.mode
    if mode == "replay":
        return ReplayProvider(cache)
    if mode == "record":
        if not config.provider.scripted_rules:
            raise click.UsageError("record mode needs provider.scripted_rules in the config")
        return RecordingProvider(load_scripted_provider(config.provider.scripted_rules), cache)
    if mode == "live":
        if not config.provider.live_endpoint:
            raise click.UsageError("live mode needs provider.live_endpoint in the config")
        return RecordingProvider(HttpProvider(config.provider.live_endpoint), cache)
    raise click.UsageError(f"unknown provider mode: {mode!r}")


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def main(ctx: click.Context, config_path: str | None) -> None:
    """Build and serve the human-AI findings atlas."""
    ctx.obj = load_config(config_path)


@main.command()
@click.option("--source", required=True, type=click.Choice(corpus_mod.SOURCE_DBS))
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.pass_obj
def ingest(config: AtlasConfig, source: str, in_path: str, out_path: str) -> None:
    """Map source-native records onto the corpus record layout."""
    raw = json.loads(Path(in_path).read_text(encoding="utf-8"))
    records, errors = corpus_mod.ingest_source(
        corpus_mod.SourceConfig(name=source, priority=tuple(config.sources.priority)), raw
    )
    corpus_mod.write_corpus(records, out_path)
    click.echo(f"ingested {len(records)} records from {source} -> {out_path}")
    for error in errors:
        click.echo(f"  skipped {error.native_id}: {error.message}", err=True)


@main.command("filter")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--report", "report_path", type=click.Path(dir_okay=False))
@click.pass_obj
def filter_cmd(config: AtlasConfig, in_path: str, out_path: str, report_path: str | None) -> None:
    """Apply the pub-type/abstract filter, then deduplicate."""
    records = corpus_mod.read_corpus(in_path)
    corpus_filter = corpus_mod.CorpusFilter(
        allowed_pub_types=config.sources.allowed_pub_types,
        require_abstract=config.sources.require_abstract,
        query_terms=tuple(config.sources.query_terms),
    )
    kept, report = corpus_mod.filter_corpus(records, corpus_filter)
    deduped = corpus_mod.dedupe(kept, priority=config.sources.priority, report=report)
    report.kept = len(deduped)
    corpus_mod.write_corpus(deduped, out_path)
    if report_path:
        dump_json(report.to_document(), report_path)
    click.echo(f"kept {report.kept} of {len(records)} records -> {out_path}")


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--cache", "cache_dir", required=True, type=click.Path(file_okay=False))
@click.option("--mode", type=click.Choice(["replay", "record", "live"]))
@click.option(
    "--out",
    "out_paths",
    default="findings.jsonl,triplets.jsonl",
    help="comma-separated findings and triplets paths",
)
@click.pass_obj
def extract(
    config: AtlasConfig, corpus_path: str, cache_dir: str, mode: str | None, out_paths: str
) -> None:
    """Run the two-stage findings/triplet extraction."""
    findings_path, triplets_path = (p.strip() for p in out_paths.split(","))
    papers = corpus_mod.read_corpus(corpus_path)
    cache = ReplayCache(cache_dir)
    provider = _build_provider(config, cache, mode)
    run = run_extraction(
        papers,
        provider,
        cache,
        model=config.provider.extraction_model,
        max_retries=config.provider.max_retries,
        backoff_base=config.provider.backoff_base,
        workers=config.provider.workers,
    )
    notes_path = str(Path(findings_path).with_name("notes.jsonl"))
    quarantine_path = str(Path(findings_path).with_name("quarantine.jsonl"))
    run.write(findings_path, triplets_path, notes_path, quarantine_path)
    click.echo(
        f"extracted {len(run.findings)} findings / {len(run.triplets)} triplets "
        f"from {len(papers)} papers ({len(run.notes)} notes, "
        f"{len(run.quarantine)} quarantined)"
    )


@main.command()
@click.option("--triplets", "triplets_path", required=True, type=click.Path(exists=True))
@click.option("--cache", "cache_dir", required=True, type=click.Path(file_okay=False))
@click.option("--mode", type=click.Choice(["replay", "record", "live"]))
@click.option("--eps", type=float)
@click.option("--min-pts", "min_pts", type=int)
@click.option("--vectors", "vectors_path", default="vectors.f32")
@click.option("--merge-map", "merge_map_path", default="merge_map.json")
@click.option("--out", "out_path", default="merged_triplets.jsonl")
@click.pass_obj
def merge(
    config: AtlasConfig,
    triplets_path: str,
    cache_dir: str,
    mode: str | None,
    eps: float | None,
    min_pts: int | None,
    vectors_path: str,
    merge_map_path: str,
    out_path: str,
) -> None:
    """Embed keys and merge synonyms by density clustering."""
    triplets = [RawTriplet.from_row(row) for row in read_jsonl(triplets_path)]
    cache = ReplayCache(cache_dir)
    provider = _build_provider(config, cache, mode)
    keys = collect_keys(triplets)
    vectors = embed_keys(
        keys,
        provider,
        cache,
        model=config.provider.embedding_model,
        dim=config.provider.embedding_dim,
    )
    save_vectors(vectors, vectors_path)
    merge_map = build_merge_map(
        vectors,
        eps=eps if eps is not None else config.merge.eps,
        min_pts=min_pts if min_pts is not None else config.merge.min_pts,
    )
    dump_json(merge_map.to_document(), merge_map_path)
    merged = apply_merge(triplets, merge_map)
    write_jsonl((t.to_row() for t in merged), out_path)
    click.echo(
        f"embedded {len(keys)} keys, merged {len(merge_map.clusters)} synonym "
        f"clusters -> {out_path}"
    )


@main.command()
@click.option("--triplets", "triplets_path", default="merged_triplets.jsonl")
@click.option("--vectors", "vectors_path", default="vectors.f32")
@click.option("--cache", "cache_dir", required=True, type=click.Path(file_okay=False))
@click.option("--mode", type=click.Choice(["replay", "record", "live"]))
@click.option("--k-min", "k_min", type=int)
@click.option("--k-max", "k_max", type=int)
@click.option("--seed", type=int)
@click.option("--out", "out_path", default="clusters.json")
@click.pass_obj
def cluster(
    config: AtlasConfig,
    triplets_path: str,
    vectors_path: str,
    cache_dir: str,
    mode: str | None,
    k_min: int | None,
    k_max: int | None,
    seed: int | None,
    out_path: str,
) -> None:
    """Group merged keys into named thematic clusters per entity type."""
    triplets = [RawTriplet.from_row(row) for row in read_jsonl(triplets_path)]
    all_vectors = load_vectors(vectors_path)
    live_keys = sorted({format_key(k) for t in triplets for k in (t.cause, t.effect)})
    vectors = {k: all_vectors[k] for k in live_keys}
    clusters = build_thematic_clusters(
        vectors,
        seed=seed if seed is not None else config.cluster.seed,
        k_range=(
            k_min if k_min is not None else config.cluster.k_min,
            k_max if k_max is not None else config.cluster.k_max,
        ),
        naming_representatives=config.cluster.naming_representatives,
        restarts=config.cluster.restarts,
    )
    cache = ReplayCache(cache_dir)
    provider = _build_provider(config, cache, mode)
    for item in clusters:
        item.name, item.description = name_cluster(
            item, provider, cache, model=config.provider.naming_model
        )
    dump_json({"clusters": [c.to_document() for c in clusters]}, out_path)
    click.echo(f"built {len(clusters)} thematic clusters -> {out_path}")


@main.command("build-graph")
@click.option("--triplets", "triplets_path", default="merged_triplets.jsonl")
@click.option("--clusters", "clusters_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--threshold", type=int)
@click.option("--out", "out_path", default="atlas.json")
@click.pass_obj
def build_graph_cmd(
    config: AtlasConfig,
    triplets_path: str,
    clusters_path: str | None,
    threshold: int | None,
    out_path: str,
) -> None:
    """Build the knowledge graph and export its canonical JSON document."""
    triplets = [RawTriplet.from_row(row) for row in read_jsonl(triplets_path)]
    clusters = None
    provenance = {"triplets_sha256": sha256_file(triplets_path)}
    if clusters_path:
        doc = load_json(clusters_path)
        clusters = [
            ThematicCluster(
                id=c["id"],
                entity_type=c["entity_type"],
                members=list(c["members"]),
                representatives=list(c["representatives"]),
                name=c.get("name"),
                description=c.get("description"),
            )
            for c in doc["clusters"]
        ]
        provenance["clusters_sha256"] = sha256_file(clusters_path)
    graph = build_graph(
        triplets,
        threshold=threshold if threshold is not None else config.graph.threshold,
        clusters=clusters,
        provenance=provenance,
    )
    Path(out_path).write_bytes(export_graph(graph))
    click.echo(f"built graph with {len(graph.nodes)} nodes / {len(graph.edges)} edges -> {out_path}")


@main.command()
@click.option("--in", "in_path", default="atlas.json", type=click.Path(exists=True))
@click.option("--out", "out_path", default="analysis.json")
@click.option("--seed", type=int)
@click.option("--top-k", "top_k", type=int)
@click.option("--tables/--no-tables", default=False, help="print the top-k tables")
@click.pass_obj
def analyze(
    config: AtlasConfig,
    in_path: str,
    out_path: str,
    seed: int | None,
    top_k: int | None,
    tables: bool,
) -> None:
    """Compute communities, centrality, and structural-hole metrics."""
    graph = load_graph(in_path)
    document = analyze_graph(
        graph, seed=seed if seed is not None else config.analysis.seed
    )
    document["meta"]["graph_sha256"] = sha256_file(in_path)
    Path(out_path).write_bytes(export_analysis(document))
    summary = document["summary"]
    click.echo(
        f"{summary['num_communities']} communities, modularity "
        f"{summary['modularity']:.4f} -> {out_path}"
    )
    if tables:
        click.echo(render_tables(document, top_k if top_k is not None else config.analysis.top_k))


@main.command()
@click.option("--data-dir", "data_dir", default=".", type=click.Path(file_okay=False))
@click.option("--host")
@click.option("--port", type=int)
@click.option(
    "--frontend-dir",
    "frontend_dir",
    type=click.Path(exists=True, file_okay=False),
    help="also serve a built web client from /",
)
@click.pass_obj
def serve(
    config: AtlasConfig,
    data_dir: str,
    host: str | None,
    port: int | None,
    frontend_dir: str | None,
) -> None:
    """Serve the exported artifacts over the read-only HTTP API."""
    import uvicorn

    app = create_app(
        SnapshotPaths.in_dir(data_dir),
        admin_token=config.service.admin_token,
        page_size=config.service.page_size,
        frontend_dir=frontend_dir,
    )
    uvicorn.run(
        app,
        host=host or config.service.host,
        port=port or config.service.port,
    )


@main.command()
@click.option("--graph", "graph_path", default="atlas.json", type=click.Path(exists=True))
@click.option("--out", "out_path", default="-")
def export(graph_path: str, out_path: str) -> None:
    """Re-validate a graph document and emit its canonical bytes."""
    payload = export_graph(load_graph(graph_path))
    if out_path == "-":
        sys.stdout.buffer.write(payload)
    else:
        Path(out_path).write_bytes(payload)
        click.echo(f"wrote {len(payload)} bytes -> {out_path}")


if __name__ == "__main__":
    main()
