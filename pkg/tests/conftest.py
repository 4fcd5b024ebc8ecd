from __future__ import annotations

import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from atlas.cli import main as atlas_cli

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURES = REPO_ROOT / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def karate_adjacency():
    from atlas.netanalysis import adjacency_from_edges

    lines = (FIXTURES / "karate_club.edgelist").read_text().splitlines()
    edges = [tuple(line.split()) for line in lines if line.strip()]
    nodes = sorted({n for e in edges for n in e}, key=int)
    return adjacency_from_edges(edges, nodes=nodes)


def run_cli(args: list[str]) -> str:
    runner = CliRunner()
    result = runner.invoke(atlas_cli, args, catch_exceptions=False)
    assert result.exit_code == 0, f"atlas {' '.join(args)} failed:\n{result.output}"
    return result.output


def run_fixture_pipeline(workdir: Path) -> dict[str, Path]:
    """Run the whole replay pipeline against the bundled fixtures."""
    workdir.mkdir(parents=True, exist_ok=True)
    base = ["--config", str(FIXTURES / "atlas.config.json")]
    cache = str(FIXTURES / "cache")
    paths = {
        name: workdir / name
        for name in (
            "raw.jsonl",
            "corpus.jsonl",
            "report.json",
            "findings.jsonl",
            "triplets.jsonl",
            "notes.jsonl",
            "quarantine.jsonl",
            "vectors.f32",
            "merge_map.json",
            "merged_triplets.jsonl",
            "clusters.json",
            "atlas.json",
            "analysis.json",
        )
    }
    run_cli(
        base
        + [
            "ingest",
            "--source",
            "fixture",
            "--in",
            str(FIXTURES / "sources" / "fixture_papers.json"),
            "--out",
            str(paths["raw.jsonl"]),
        ]
    )
    run_cli(
        base
        + [
            "filter",
            "--in",
            str(paths["raw.jsonl"]),
            "--out",
            str(paths["corpus.jsonl"]),
            "--report",
            str(paths["report.json"]),
        ]
    )
    run_cli(
        base
        + [
            "extract",
            "--corpus",
            str(paths["corpus.jsonl"]),
            "--cache",
            cache,
            "--mode",
            "replay",
            "--out",
            f"{paths['findings.jsonl']},{paths['triplets.jsonl']}",
        ]
    )
    run_cli(
        base
        + [
            "merge",
            "--triplets",
            str(paths["triplets.jsonl"]),
            "--cache",
            cache,
            "--mode",
            "replay",
            "--vectors",
            str(paths["vectors.f32"]),
            "--merge-map",
            str(paths["merge_map.json"]),
            "--out",
            str(paths["merged_triplets.jsonl"]),
        ]
    )
    run_cli(
        base
        + [
            "cluster",
            "--triplets",
            str(paths["merged_triplets.jsonl"]),
            "--vectors",
            str(paths["vectors.f32"]),
            "--cache",
            cache,
            "--mode",
            "replay",
            "--out",
            str(paths["clusters.json"]),
        ]
    )
    run_cli(
        base
        + [
            "build-graph",
            "--triplets",
            str(paths["merged_triplets.jsonl"]),
            "--clusters",
            str(paths["clusters.json"]),
            "--out",
            str(paths["atlas.json"]),
        ]
    )
    run_cli(
        base
        + [
            "analyze",
            "--in",
            str(paths["atlas.json"]),
            "--out",
            str(paths["analysis.json"]),
        ]
    )
    return paths


@pytest.fixture(scope="session")
def fixture_artifacts(tmp_path_factory) -> dict[str, Path]:
    """One shared replay-pipeline run for tests that only read its outputs."""
    workdir = tmp_path_factory.mktemp("pipeline")
    return run_fixture_pipeline(workdir)


@pytest.fixture(scope="session")
def fixture_graph_doc(fixture_artifacts) -> dict:
    return json.loads(fixture_artifacts["atlas.json"].read_text())
