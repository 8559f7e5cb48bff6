"""CLI behavior: import, query, bench, and serve wiring."""

import json
import os

import pytest

from graphtalk.cli import main
from graphtalk.store import PropertyGraph, load_graph, save_graph


def small_graph_file(path, names, edges=()):
    graph = PropertyGraph()
    ids = {name: graph.insert_node(name, "Concept") for name in names}
    for source, relation, target in edges:
        graph.insert_edge(ids[source], relation, ids[target])
    save_graph(graph, path)
    return path


class TestImport:
    def test_import_into_fresh_file(self, tmp_path, capsys):
        source = small_graph_file(tmp_path / "src.jsonl", ["A", "B"], [("A", "RELATED_TO", "B")])
        target = tmp_path / "main.jsonl"
        assert main(["import", "--file", str(source), "--graph", str(target)]) == 0
        merged = load_graph(target)
        assert merged.node_count == 2 and merged.edge_count == 1
        assert "2 new node(s), 1 new edge(s)" in capsys.readouterr().out

    def test_import_is_union(self, tmp_path, capsys):
        source = small_graph_file(tmp_path / "src.jsonl", ["A", "B"], [("A", "RELATED_TO", "B")])
        target = small_graph_file(tmp_path / "main.jsonl", ["B", "C"])
        assert main(["import", "--file", str(source), "--graph", str(target)]) == 0
        merged = load_graph(target)
        assert merged.node_count == 3
        assert "1 new node(s), 1 new edge(s)" in capsys.readouterr().out

    def test_import_twice_is_idempotent(self, tmp_path, capsys):
        source = small_graph_file(tmp_path / "src.jsonl", ["A", "B"])
        target = tmp_path / "main.jsonl"
        main(["import", "--file", str(source), "--graph", str(target)])
        main(["import", "--file", str(source), "--graph", str(target)])
        assert "0 new node(s), 0 new edge(s)" in capsys.readouterr().out

    def test_import_missing_file_fails(self, tmp_path, capsys):
        code = main(["import", "--file", str(tmp_path / "nope.jsonl"), "--graph", str(tmp_path / "t.jsonl")])
        assert code == 1
        err = json.loads(capsys.readouterr().err)
        assert err["code"] == "io_failure"


class TestQuery:
    def test_read_query_against_bundled_graph(self, capsys):
        code = main(["query", "--text", "MATCH (c:Concept) RETURN c.name LIMIT 3"])
        assert code == 0
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "c.name"
        assert len(out.splitlines()) == 4

    def test_read_query_json_format(self, capsys):
        code = main(["query", "--text", "MATCH (c:Concept) RETURN c.name LIMIT 2", "--format", "json"])
        assert code == 0
        body = json.loads(capsys.readouterr().out)
        assert body["columns"] == ["c.name"]
        assert len(body["rows"]) == 2

    def test_write_query_needs_graph_file(self, capsys):
        code = main(["query", "--text", "CREATE (n:Concept {name: 'Tmp'})"])
        assert code == 1
        assert "read-only" in capsys.readouterr().err

    def test_write_query_persists(self, tmp_path, capsys):
        path = small_graph_file(tmp_path / "g.jsonl", ["A"])
        code = main(["query", "--text", "CREATE (n:Concept {name: 'B'})", "--graph", str(path)])
        assert code == 0
        assert "nodes_created=1" in capsys.readouterr().out
        assert load_graph(path).node_count == 2

    def test_syntax_error_exits_nonzero(self, capsys):
        code = main(["query", "--text", "MATCH (((("])
        assert code == 1
        err = json.loads(capsys.readouterr().err)
        assert err["code"] == "query_syntax"


class TestBench:
    def test_bundled_fixture_all_correct(self, capsys):
        code = main(["bench", "--format", "json"])
        assert code == 0
        body = json.loads(capsys.readouterr().out)
        assert body["accuracy"] == 1.0
        assert body["exec_success"] == 1.0

    def test_report_bundle_includes_figures(self, tmp_path, capsys):
        out_dir = tmp_path / "report"
        code = main(["bench", "--out", str(out_dir)])
        assert code == 0
        names = sorted(os.listdir(out_dir))
        assert "confusion_matrix.png" in names
        assert "per_class_f1.png" in names
        assert "report.csv" in names and "report.json" in names and "report.txt" in names
        assert "records.jsonl" in names
        assert "Acc. | F1 | Exec. Success" in capsys.readouterr().out

    def test_floor_violation_exits_nonzero(self, tmp_path, capsys):
        dataset = tmp_path / "two.jsonl"
        rows = [
            {"query": "Is alpha a prerequisite of beta here?", "gold_task": "RELATION_JUDGMENT"},
            {"query": "Say something about this graph.", "gold_task": "FREE_FORM"},
        ]
        dataset.write_text("\n".join(json.dumps(row) for row in rows) + "\n")
        code = main(["bench", "--dataset", str(dataset), "--min-exec-success", "0.9"])
        assert code == 1
        assert "below the floor" in capsys.readouterr().err

    def test_http_backend_requires_endpoint(self, capsys):
        code = main(["bench", "--backend", "http"])
        assert code == 1
        err = json.loads(capsys.readouterr().err)
        assert err["code"] == "invalid_config"

    def test_malformed_dataset_fails_cleanly(self, tmp_path, capsys):
        dataset = tmp_path / "bad.jsonl"
        dataset.write_text('{"query": "x", "gold_task": "NOT_A_TASK"}\n')
        code = main(["bench", "--dataset", str(dataset)])
        assert code == 1
        assert json.loads(capsys.readouterr().err)["code"] == "malformed_record"


class TestServe:
    def test_serve_wires_config(self, tmp_path, monkeypatch):
        calls = {}

        def fake_run(app, host, port, log_level):
            calls["app"] = app
            calls["host"] = host
            calls["port"] = port

        import uvicorn

        monkeypatch.setattr(uvicorn, "run", fake_run)
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"port": 8123}))
        assert main(["serve", "--config", str(config)]) == 0
        assert calls["port"] == 8123
        assert any(route.path == "/api/chat" for route in calls["app"].routes)

    def test_serve_port_flag_overrides(self, tmp_path, monkeypatch):
        calls = {}
        import uvicorn

        monkeypatch.setattr(uvicorn, "run", lambda app, host, port, log_level: calls.update(port=port))
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"port": 8123}))
        assert main(["serve", "--config", str(config), "--port", "9001"]) == 0
        assert calls["port"] == 9001

    def test_unknown_subcommand_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2
