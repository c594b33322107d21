"""CLI exit codes and end-to-end stage wiring."""

import json

import pytest

from climkg import SCHEMA_VERSION
from climkg.cli import main
from climkg.config import ConfigError, RunConfig, load_config


class TestExitCodes:
    def test_version_reports_schema(self, capsys):
        assert main(["--version"]) == 0
        out = capsys.readouterr().out
        assert SCHEMA_VERSION in out

    def test_usage_error_is_one(self, capsys):
        assert main(["no-such-command"]) == 1
        assert main(["ingest"]) == 1  # missing required options

    def test_validation_error_is_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"tau_desc": 7.5}))
        code = main([
            "enrich", "--in", str(bad), "--out", str(tmp_path / "o"),
            "--config", str(bad),
        ])
        assert code == 2
        assert "validation error" in capsys.readouterr().err


class TestStages:
    def test_full_stage_chain(self, corpus, cesm_csv, tmp_path, capsys):
        harmonized = tmp_path / "h.jsonl"
        classified = tmp_path / "c.jsonl"
        enriched = tmp_path / "e.jsonl"
        graph_dir = tmp_path / "graph"

        assert main(["--json", "ingest", "--source", str(corpus.dir),
                     "--out", str(harmonized), "--offline"]) == 0
        assert json.loads(capsys.readouterr().out)["records"] == 50

        assert main(["--json", "geo", "--in", str(harmonized),
                     "--out", str(classified)]) == 0
        scopes = json.loads(capsys.readouterr().out)["scopes"]
        assert scopes.get("country", 0) >= 1
        assert scopes.get("ocean", 0) >= 1
        assert scopes.get("global", 0) >= 1

        assert main(["--json", "enrich", "--in", str(classified),
                     "--cesm", str(cesm_csv), "--out", str(enriched)]) == 0
        capsys.readouterr()

        assert main(["--json", "build", "--in", str(enriched),
                     "--cesm", str(cesm_csv), "--out", str(graph_dir)]) == 0
        manifest = json.loads(capsys.readouterr().out)
        assert manifest["node_count"] > 100

        assert main(["--json", "load", "--graph", str(graph_dir)]) == 0
        loaded = json.loads(capsys.readouterr().out)
        assert loaded["nodes"] == manifest["node_count"]

    def test_search_jsonl_output(self, pipeline_run, tmp_path, capsys):
        cache = tmp_path / "cache.sqlite"
        assert main(["search", "--graph", str(pipeline_run.graph_dir),
                     "--query", "tide gauge sea level",
                     "--place", "New York", "--after", "2000",
                     "--cache", str(cache)]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 1
        hit = json.loads(lines[0])
        assert "Tide Gauge" in hit["title"]
        assert cache.exists()

    def test_acquire_planted_dataset(self, pipeline_run, graph, tmp_path, capsys):
        from climkg.graph_builder import node_id

        from conftest import NYC_CONCEPT_ID

        ds_id = node_id("Dataset", {"concept_id": NYC_CONCEPT_ID})
        assert main(["--json", "acquire", "--graph", str(pipeline_run.graph_dir),
                     "--dataset", ds_id, "--out", str(tmp_path)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["status"] == "analyzed" and payload["V"] == 1

    def test_eval_cluster(self, cesm_csv, tmp_path, capsys):
        pred = tmp_path / "pred.csv"
        truth = tmp_path / "truth.csv"
        pred.write_text("id,name\nk1,TREFHT\nk2,TREFHTMX\nk3,SST\n")
        truth.write_text("id,name\nk1,TREFHT\nk2,TREFHT\nk3,SALT\n")
        assert main(["--json", "eval-cluster", "--pred", str(pred),
                     "--truth", str(truth), "--cesm", str(cesm_csv)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["exact_accuracy"] == pytest.approx(1 / 3)
        assert payload["group_accuracy"] == pytest.approx(2 / 3)
        assert payload["unmatched"] == 1


class TestConfig:
    def test_defaults_validate(self):
        RunConfig().validate()

    def test_threshold_range_enforced(self):
        with pytest.raises(ConfigError):
            RunConfig(tau_name=1.5).validate()
        with pytest.raises(ConfigError):
            RunConfig(location_k=0).validate()

    def test_toml_and_json_sources(self, tmp_path):
        toml_path = tmp_path / "c.toml"
        toml_path.write_text("tau_desc = 0.65\nmystery = 'kept'\n")
        config = load_config(toml_path)
        assert config.tau_desc == 0.65
        assert config.extra == {"mystery": "kept"}
        json_path = tmp_path / "c.json"
        json_path.write_text(json.dumps({"tau_name": 0.9}))
        assert load_config(json_path).tau_name == 0.9

    def test_overrides_win(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"tau_desc": 0.6}))
        config = load_config(path, {"tau_desc": 0.75})
        assert config.tau_desc == 0.75

    def test_missing_data_path_rejected(self):
        with pytest.raises(ConfigError, match="does not exist"):
            RunConfig(boundaries_path="/nowhere/boundaries.geojson").validate()
