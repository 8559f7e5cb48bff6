"""Tests for the benchmark harness: dataset, metrics, runner, reports."""

import json
import os
import random

import pytest

from graphtalk.bench import (
    BenchmarkRecord,
    Metrics,
    compute_metrics,
    load_dataset,
    render,
    render_csv,
    render_figures,
    render_json,
    render_text,
    run_benchmark,
    write_report,
)
from graphtalk.errors import MalformedRecordError
from graphtalk.fixtures import benchmark_fixture_path, demo_graph_path, mock_script_path
from graphtalk.llm import MockBackend, load_mock_script
from graphtalk.pipeline import INTENT_KINDS, PipelineContext
from graphtalk.store import load_graph


def fixture_context():
    graph = load_graph(demo_graph_path())
    backend = MockBackend(load_mock_script(mock_script_path()))
    return PipelineContext(graph, backend)


class TestLoadDataset:
    def test_bundled_fixture(self):
        records = load_dataset(benchmark_fixture_path())
        assert len(records) == 70
        by_kind = {}
        for record in records:
            by_kind[record.gold_task] = by_kind.get(record.gold_task, 0) + 1
        assert by_kind == {kind: 10 for kind in INTENT_KINDS}

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.jsonl"
        path.write_text("")
        assert load_dataset(str(path)) == []

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "gaps.jsonl"
        path.write_text('\n{"query": "q", "gold_task": "FREE_FORM"}\n\n')
        assert len(load_dataset(str(path))) == 1

    def test_bad_gold_task(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"query": "q", "gold_task": "NOT_A_TASK"}\n')
        with pytest.raises(MalformedRecordError) as excinfo:
            load_dataset(str(path))
        assert excinfo.value.line_number == 1

    def test_bad_json_line_number(self, tmp_path):
        path = tmp_path / "broken.jsonl"
        path.write_text('{"query": "q", "gold_task": "FREE_FORM"}\n{oops\n')
        with pytest.raises(MalformedRecordError) as excinfo:
            load_dataset(str(path))
        assert excinfo.value.line_number == 2

    def test_unknown_field_rejected(self, tmp_path):
        path = tmp_path / "extra.jsonl"
        path.write_text('{"query": "q", "gold_task": "FREE_FORM", "note": 1}\n')
        with pytest.raises(MalformedRecordError):
            load_dataset(str(path))

    def test_non_object_rejected(self, tmp_path):
        path = tmp_path / "arr.jsonl"
        path.write_text("[1, 2]\n")
        with pytest.raises(MalformedRecordError):
            load_dataset(str(path))

    def test_bad_gold_concepts(self, tmp_path):
        path = tmp_path / "gc.jsonl"
        path.write_text('{"query": "q", "gold_task": "FREE_FORM", "gold_concepts": [""]}\n')
        with pytest.raises(MalformedRecordError):
            load_dataset(str(path))


def balanced_vectors():
    """70 gold labels, 10 per kind, in axis order."""
    gold = []
    for kind in INTENT_KINDS:
        gold.extend([kind] * 10)
    return gold


class TestMetrics:
    def test_all_correct(self):
        gold = balanced_vectors()
        metrics = compute_metrics(gold, list(gold), [True] * len(gold))
        assert metrics.accuracy == 1.0
        assert metrics.macro_f1 == 1.0
        assert metrics.exec_success == 1.0
        assert metrics.exec_success_on_correct == 1.0
        for kind in INTENT_KINDS:
            assert metrics.per_class[kind] == {"precision": 1.0, "recall": 1.0, "f1": 1.0, "support": 10}

    def test_path_misclassified_as_free_form(self):
        gold = balanced_vectors()
        predicted = ["FREE_FORM" if g == "PATH_SEARCHING" else g for g in gold]
        metrics = compute_metrics(gold, predicted, [True] * len(gold))
        assert metrics.accuracy == 60 / 70
        path = metrics.per_class["PATH_SEARCHING"]
        assert path == {"precision": 0.0, "recall": 0.0, "f1": 0.0, "support": 10}
        free = metrics.per_class["FREE_FORM"]
        assert free["precision"] == 0.5
        assert free["recall"] == 1.0
        expected_f1 = 2 * 0.5 * 1.0 / (0.5 + 1.0)
        assert free["f1"] == expected_f1
        assert metrics.macro_f1 == (5 * 1.0 + 0.0 + expected_f1) / 7

    def test_confusion_row_sums_are_supports(self):
        gold = balanced_vectors()
        rng = random.Random(7)
        predicted = [rng.choice(INTENT_KINDS) for _ in gold]
        metrics = compute_metrics(gold, predicted, [True] * len(gold))
        for kind, row in zip(INTENT_KINDS, metrics.confusion):
            assert sum(row) == metrics.per_class[kind]["support"]
        diagonal = sum(metrics.confusion[i][i] for i in range(len(INTENT_KINDS)))
        assert metrics.accuracy == diagonal / len(gold)

    def test_empty_input_is_flagged_undefined(self):
        metrics = compute_metrics([], [], [])
        assert metrics.undefined is True
        assert metrics.total == 0
        assert metrics.accuracy != metrics.accuracy  # NaN

    def test_zero_support_classes_excluded_from_macro(self):
        gold = ["FREE_FORM", "FREE_FORM"]
        predicted = ["FREE_FORM", "FREE_FORM"]
        metrics = compute_metrics(gold, predicted, [True, True])
        assert metrics.macro_f1 == 1.0

    def test_exec_rates(self):
        gold = ["FREE_FORM", "FREE_FORM", "PATH_SEARCHING"]
        predicted = ["FREE_FORM", "PATH_SEARCHING", "PATH_SEARCHING"]
        metrics = compute_metrics(gold, predicted, [True, False, False])
        assert metrics.exec_success == 1 / 3
        assert metrics.exec_success_on_correct == 0.5

    def test_no_correct_predictions_gives_nan_conditional(self):
        metrics = compute_metrics(["FREE_FORM"], ["PATH_SEARCHING"], [True])
        assert metrics.exec_success_on_correct != metrics.exec_success_on_correct

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            compute_metrics(["FREE_FORM"], [], [])

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            compute_metrics(["NOPE"], ["FREE_FORM"], [True])

    def test_oracle_agreement_on_random_vectors(self):
        rng = random.Random(20250819)
        for _ in range(200):
            n = rng.randint(1, 100)
            gold = [rng.choice(INTENT_KINDS) for _ in range(n)]
            predicted = [rng.choice(INTENT_KINDS) for _ in range(n)]
            metrics = compute_metrics(gold, predicted, [True] * n)
            for kind in INTENT_KINDS:
                tp = sum(1 for g, p in zip(gold, predicted) if g == kind and p == kind)
                fp = sum(1 for g, p in zip(gold, predicted) if g != kind and p == kind)
                fn = sum(1 for g, p in zip(gold, predicted) if g == kind and p != kind)
                precision = tp / (tp + fp) if tp + fp else 0.0
                recall = tp / (tp + fn) if tp + fn else 0.0
                f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
                stats = metrics.per_class[kind]
                assert stats["precision"] == precision
                assert stats["recall"] == recall
                assert stats["f1"] == f1
            assert metrics.accuracy == sum(1 for g, p in zip(gold, predicted) if g == p) / n


class TestReport:
    def sample_metrics(self):
        gold = balanced_vectors()
        return compute_metrics(gold, list(gold), [True] * len(gold))

    def test_text_has_table_row(self):
        text = render_text(self.sample_metrics())
        assert "Acc. | F1 | Exec. Success" in text
        assert "1.0000 | 1.0000 | 1.0000" in text

    def test_json_round_trip(self):
        metrics = self.sample_metrics()
        parsed = Metrics.from_dict(json.loads(render_json(metrics)))
        assert parsed.to_dict() == metrics.to_dict()

    def test_json_round_trip_with_nan(self):
        metrics = compute_metrics([], [], [])
        parsed = Metrics.from_dict(json.loads(render_json(metrics)))
        assert parsed.to_dict() == metrics.to_dict()

    def test_csv_shape(self):
        lines = render_csv(self.sample_metrics()).strip().splitlines()
        assert len(lines) == 9
        assert lines[0] == "class,precision,recall,f1,support"
        assert lines[1].startswith("RELATION_JUDGMENT,")
        assert lines[-1].startswith("SUMMARY,")

    def test_undefined_renders_na(self):
        text = render_text(compute_metrics([], [], []))
        assert "n/a | n/a | n/a" in text

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            render(self.sample_metrics(), "xml")

    def test_figures_are_written(self, tmp_path):
        paths = render_figures(self.sample_metrics(), str(tmp_path))
        assert [os.path.basename(p) for p in paths] == ["confusion_matrix.png", "per_class_f1.png"]
        for path in paths:
            with open(path, "rb") as handle:
                assert handle.read(8) == b"\x89PNG\r\n\x1a\n"

    def test_write_report_bundle(self, tmp_path):
        metrics = self.sample_metrics()
        written = write_report(metrics, [{"query": "q", "exec_success": True}], str(tmp_path))
        names = sorted(os.path.basename(p) for p in written)
        assert names == [
            "confusion_matrix.png",
            "per_class_f1.png",
            "records.jsonl",
            "report.csv",
            "report.json",
            "report.txt",
        ]


class TestRunBenchmark:
    def test_fixture_is_all_correct(self):
        records = load_dataset(benchmark_fixture_path())
        metrics, logs = run_benchmark(fixture_context(), records)
        assert metrics.accuracy == 1.0
        assert metrics.macro_f1 == 1.0
        assert metrics.exec_success == 1.0
        assert metrics.exec_success_on_correct == 1.0
        assert len(logs) == 70
        assert all(log["trace_id"] for log in logs)

    def test_runs_are_deterministic(self):
        records = load_dataset(benchmark_fixture_path())
        first, first_logs = run_benchmark(fixture_context(), records)
        second, second_logs = run_benchmark(fixture_context(), records)
        assert first.to_dict() == second.to_dict()
        assert first_logs == second_logs

    def test_parallel_read_only_matches_serial(self):
        records = [r for r in load_dataset(benchmark_fixture_path()) if r.gold_task != "FREE_FORM"]
        serial, _ = run_benchmark(fixture_context(), records, workers=1)
        parallel, _ = run_benchmark(fixture_context(), records, workers=3)
        assert serial.to_dict() == parallel.to_dict()

    def test_failed_execution_is_counted_not_fatal(self, tmp_path):
        # extraction yields one concept, so the two-argument path kernel cannot run
        from graphtalk.llm import MockRule, MockScript
        from graphtalk.store import PropertyGraph

        graph = PropertyGraph()
        graph.upsert_node("Alpha", "Concept")
        script = MockScript(
            rules=[
                MockRule(match="### TASK: classify-intent", response="PATH_SEARCHING"),
                MockRule(match="### TASK: extract-concepts", response="ENTITY: Alpha|0|5"),
            ],
            default_response="OK",
        )
        records = [BenchmarkRecord(query="Alpha to nowhere?", gold_task="PATH_SEARCHING")]
        metrics, logs = run_benchmark(PipelineContext(graph, MockBackend(script)), records)
        assert metrics.accuracy == 1.0
        assert metrics.exec_success == 0.0
        assert "missing_concepts" in logs[0]["exec_reason"]

    def test_gold_schema_mismatch_fails_execution(self):
        # correct pipeline run for CLUSTERING cannot satisfy a PATH_SEARCHING gold schema
        records = [BenchmarkRecord(query="Group all the concepts into clusters.", gold_task="PATH_SEARCHING")]
        context = fixture_context()
        metrics, logs = run_benchmark(context, records)
        assert metrics.exec_success == 0.0
        assert "no path_search step" in logs[0]["exec_reason"]

    def test_bad_worker_count(self):
        with pytest.raises(ValueError):
            run_benchmark(fixture_context(), [], workers=0)
