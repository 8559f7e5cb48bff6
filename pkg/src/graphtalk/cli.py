"""Command-line entry point.

Subcommands: serve (HTTP service), import (merge a graph file), query (run
one statement against a graph), bench (score a dataset and render reports,
including figures when an output directory is given).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional, Tuple

from graphtalk.bench import load_dataset, render, run_benchmark, write_report
from graphtalk.config import AppConfig, config_from_dict, load_config
from graphtalk.errors import GraphTalkError, error_payload
from graphtalk.fixtures import benchmark_fixture_path
from graphtalk.pipeline import render_table
from graphtalk.query import execute, parse, render_value
from graphtalk.store import MutationSummary, PropertyGraph, load_graph, save_graph
from graphtalk.wiring import build_context, build_graph


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphtalk", description="Graph chat service and tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", help="path to a JSON config file")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, help="override the configured port")

    imp = sub.add_parser("import", help="merge a graph file into another (union semantics)")
    imp.add_argument("--file", required=True, help="graph JSONL file to read")
    imp.add_argument("--graph", default="graph.jsonl", help="target graph file (created if absent)")

    query = sub.add_parser("query", help="run one query against a graph file")
    query.add_argument("--text", required=True, help="the query to run")
    query.add_argument("--graph", help="graph JSONL file; default is the bundled demo, read-only")
    query.add_argument("--format", choices=("text", "json"), default="text")

    bench = sub.add_parser("bench", help="score a benchmark dataset")
    bench.add_argument("--dataset", help="JSONL dataset; default is the bundled 70-record fixture")
    bench.add_argument("--backend", choices=("mock", "http"), default="mock")
    bench.add_argument("--script", help="mock script to use instead of the bundled one")
    bench.add_argument("--config", help="path to a JSON config file")
    bench.add_argument("--graph", help="graph JSONL file; default is the bundled demo")
    bench.add_argument("--format", choices=("text", "json", "csv"), default="text")
    bench.add_argument("--out", help="directory for the full report bundle (text/json/csv/figures)")
    bench.add_argument("--min-exec-success", type=float, help="exit nonzero if exec success falls below this")
    bench.add_argument("--workers", type=int, help="parallel record evaluation (keep 1 for mutating runs)")

    return parser


def _load_app_config(path: Optional[str]) -> AppConfig:
    return load_config(path) if path else AppConfig()


def _merge_graphs(target: PropertyGraph, source: PropertyGraph) -> MutationSummary:
    """Union-merge source into target; source ids are remapped as needed."""
    summary = MutationSummary()
    id_map = {}
    for node in source.nodes_sorted():
        outcome = target.upsert_node(node.name, node.label, node.properties)
        id_map[node.id] = outcome.id
        if outcome.created:
            summary.nodes_created += 1
    for edge in sorted(source.edges.values(), key=lambda e: e.id):
        outcome = target.upsert_edge(id_map[edge.source], edge.relation, id_map[edge.target], edge.properties)
        if outcome.created:
            summary.edges_created += 1
    return summary


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from graphtalk.service import create_app

    config = _load_app_config(args.config)
    if args.port is not None:
        config.port = args.port
    app = create_app(config)
    uvicorn.run(app, host=args.host, port=config.port, log_level="warning")
    return 0


def _cmd_import(args: argparse.Namespace) -> int:
    source = load_graph(args.file)
    if os.path.exists(args.graph):
        target = load_graph(args.graph)
    else:
        target = PropertyGraph()
    summary = _merge_graphs(target, source)
    save_graph(target, args.graph)
    print(
        f"merged {args.file} into {args.graph}: "
        f"{summary.nodes_created} new node(s), {summary.edges_created} new edge(s); "
        f"now {target.node_count} nodes, {target.edge_count} edges"
    )
    return 0


def _cmd_query(args: argparse.Namespace) -> int:
    ast = parse(args.text)
    if ast.is_write() and not args.graph:
        print("write queries need --graph; the bundled demo graph is read-only", file=sys.stderr)
        return 1
    graph = load_graph(args.graph) if args.graph else build_graph(AppConfig())
    result = execute(graph, ast)
    if isinstance(result, MutationSummary):
        save_graph(graph, args.graph)
        payload = result.to_dict()
        print(json.dumps(payload, sort_keys=True) if args.format == "json" else _format_summary(payload))
        return 0
    if args.format == "json":
        rows = [[render_value(cell) for cell in row] for row in result.rows]
        print(json.dumps({"columns": result.columns, "rows": rows}))
    else:
        print(render_table(result))
    return 0


def _format_summary(payload: dict) -> str:
    parts = [f"{key}={payload[key]}" for key in sorted(payload)]
    return "applied: " + " ".join(parts)


def _bench_pieces(args: argparse.Namespace) -> Tuple[AppConfig, List]:
    # Re-validate after applying flag overrides so e.g. --backend http
    # without a configured endpoint fails up front.
    data = _load_app_config(args.config).to_dict()
    data["backend"] = args.backend
    if args.script:
        data["mock_script"] = args.script
    if args.graph:
        data["graph_path"] = args.graph
    config = config_from_dict(data)
    records = load_dataset(args.dataset or benchmark_fixture_path())
    return config, records


def _cmd_bench(args: argparse.Namespace) -> int:
    config, records = _bench_pieces(args)
    context = build_context(config)
    workers = args.workers if args.workers is not None else config.bench_parallelism
    metrics, logs = run_benchmark(context, records, workers=workers)
    print(render(metrics, args.format))
    if args.out:
        written = write_report(metrics, logs, args.out)
        print(f"wrote {len(written)} file(s) under {args.out}", file=sys.stderr)
    floor = args.min_exec_success if args.min_exec_success is not None else config.exec_success_floor
    if metrics.total > 0 and metrics.exec_success < floor:
        print(
            f"exec success {metrics.exec_success:.4f} is below the floor {floor:.4f}",
            file=sys.stderr,
        )
        return 1
    return 0


_COMMANDS = {
    "serve": _cmd_serve,
    "import": _cmd_import,
    "query": _cmd_query,
    "bench": _cmd_bench,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except GraphTalkError as exc:
        print(json.dumps(error_payload(exc), sort_keys=True), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
