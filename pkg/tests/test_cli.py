import json

from click.testing import CliRunner

from atlas.cli import main as atlas_cli
from conftest import FIXTURES, run_cli


class TestIngestFilter:
    def test_ingest_writes_jsonl(self, tmp_path):
        out = tmp_path / "raw.jsonl"
        output = run_cli(
            [
                "ingest",
                "--source",
                "fixture",
                "--in",
                str(FIXTURES / "sources" / "fixture_papers.json"),
                "--out",
                str(out),
            ]
        )
        assert "ingested 29 records" in output
        assert len(out.read_text().splitlines()) == 29

    def test_filter_report_accounts_for_all_records(self, tmp_path):
        raw = tmp_path / "raw.jsonl"
        corpus = tmp_path / "corpus.jsonl"
        report_path = tmp_path / "report.json"
        run_cli(
            [
                "ingest",
                "--source",
                "fixture",
                "--in",
                str(FIXTURES / "sources" / "fixture_papers.json"),
                "--out",
                str(raw),
            ]
        )
        run_cli(
            [
                "--config",
                str(FIXTURES / "atlas.config.json"),
                "filter",
                "--in",
                str(raw),
                "--out",
                str(corpus),
                "--report",
                str(report_path),
            ]
        )
        report = json.loads(report_path.read_text())
        assert report["kept"] == 25
        assert report["kept"] + len(report["dropped"]) == 29
        reasons = {d["reason"] for d in report["dropped"]}
        assert reasons == {"missing_abstract", "pub_type_excluded", "duplicate"}

    def test_unknown_source_rejected(self, tmp_path):
        runner = CliRunner()
        result = runner.invoke(
            atlas_cli,
            ["ingest", "--source", "scholar", "--in", "x", "--out", str(tmp_path / "o")],
        )
        assert result.exit_code != 0


class TestReplayGuard:
    def test_replay_miss_fails_loudly(self, tmp_path):
        corpus = tmp_path / "corpus.jsonl"
        corpus.write_text(
            json.dumps(
                {
                    "id": "px",
                    "title": "T",
                    "abstract": "An abstract that was never recorded.",
                    "venue": "V",
                    "source_db": "fixture",
                    "pub_type": "Research Article",
                    "year": 2024,
                    "authors": [],
                    "doi": None,
                    "url": None,
                }
            )
            + "\n"
        )
        runner = CliRunner()
        result = runner.invoke(
            atlas_cli,
            [
                "extract",
                "--corpus",
                str(corpus),
                "--cache",
                str(tmp_path / "empty-cache"),
                "--mode",
                "replay",
                "--out",
                f"{tmp_path / 'f.jsonl'},{tmp_path / 't.jsonl'}",
            ],
        )
        assert result.exit_code != 0
        assert isinstance(result.exception, Exception)
        assert "no recorded response" in str(result.exception)


class TestExportCommand:
    def test_export_emits_canonical_bytes(self, fixture_artifacts, tmp_path):
        out = tmp_path / "atlas-canonical.json"
        run_cli(
            [
                "export",
                "--graph",
                str(fixture_artifacts["atlas.json"]),
                "--out",
                str(out),
            ]
        )
        assert out.read_bytes() == fixture_artifacts["atlas.json"].read_bytes()


class TestAnalyzeTables:
    def test_tables_rendered(self, fixture_artifacts, tmp_path):
        output = run_cli(
            [
                "analyze",
                "--in",
                str(fixture_artifacts["atlas.json"]),
                "--out",
                str(tmp_path / "analysis.json"),
                "--seed",
                "7",
                "--top-k",
                "5",
                "--tables",
            ]
        )
        assert "structural holes" in output
        assert "community bridges" in output
