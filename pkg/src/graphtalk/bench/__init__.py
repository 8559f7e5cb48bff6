"""Benchmark harness: dataset, metrics, runner, reports."""

from .dataset import BenchmarkRecord, load_dataset
from .metrics import Metrics, compute_metrics
from .report import render, render_csv, render_figures, render_json, render_text, write_report
from .runner import run_benchmark, validate_execution

__all__ = [
    "BenchmarkRecord",
    "Metrics",
    "compute_metrics",
    "load_dataset",
    "render",
    "render_csv",
    "render_figures",
    "render_json",
    "render_text",
    "run_benchmark",
    "validate_execution",
    "write_report",
]
