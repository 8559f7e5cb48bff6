"""Report rendering: text, JSON, CSV, and figure files for a benchmark run."""

import csv
import io
import json
import math
import os
from typing import List

import matplotlib

matplotlib.use("Agg")  # file output only; no display in server environments
import matplotlib.pyplot as plt

from graphtalk.bench.metrics import Metrics


def _fmt(value: float) -> str:
    if isinstance(value, float) and math.isnan(value):
        return "n/a"
    return f"{value:.4f}"


def render_text(metrics: Metrics) -> str:
    lines: List[str] = []
    lines.append(f"Benchmark over {metrics.total} records")
    lines.append("")
    lines.append("Acc. | F1 | Exec. Success")
    lines.append(
        f"{_fmt(metrics.accuracy)} | {_fmt(metrics.macro_f1)} | {_fmt(metrics.exec_success)}"
    )
    lines.append(f"Exec. success on correctly classified: {_fmt(metrics.exec_success_on_correct)}")
    if metrics.undefined:
        lines.append("NOTE: empty input; all rates are undefined")
    lines.append("")
    lines.append("Per class (precision / recall / f1 / support):")
    width = max(len(kind) for kind in metrics.kinds)
    for kind in metrics.kinds:
        stats = metrics.per_class[kind]
        lines.append(
            f"  {kind.ljust(width)}  {_fmt(stats['precision'])} / {_fmt(stats['recall'])}"
            f" / {_fmt(stats['f1'])} / {int(stats['support'])}"
        )
    lines.append("")
    lines.append("Confusion (rows = gold, columns = predicted):")
    header = "  " + " ".join(kind[:4].rjust(5) for kind in metrics.kinds)
    lines.append(header)
    for kind, row in zip(metrics.kinds, metrics.confusion):
        lines.append("  " + " ".join(str(cell).rjust(5) for cell in row) + f"  {kind}")
    return "\n".join(lines) + "\n"


def render_json(metrics: Metrics) -> str:
    return json.dumps(metrics.to_dict(), indent=2, sort_keys=True) + "\n"


def render_csv(metrics: Metrics) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(["class", "precision", "recall", "f1", "support"])
    for kind in metrics.kinds:
        stats = metrics.per_class[kind]
        writer.writerow([kind, _fmt(stats["precision"]), _fmt(stats["recall"]), _fmt(stats["f1"]), int(stats["support"])])
    writer.writerow(
        [
            "SUMMARY",
            f"accuracy={_fmt(metrics.accuracy)}",
            f"macro_f1={_fmt(metrics.macro_f1)}",
            f"exec_success={_fmt(metrics.exec_success)}",
            f"total={metrics.total}",
        ]
    )
    return buffer.getvalue()


def render(metrics: Metrics, format: str) -> str:
    if format == "text":
        return render_text(metrics)
    if format == "json":
        return render_json(metrics)
    if format == "csv":
        return render_csv(metrics)
    raise ValueError(f"unknown report format {format!r}")


def render_figures(metrics: Metrics, out_dir: str) -> List[str]:
    """Write confusion-matrix and per-class F1 figures; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths: List[str] = []
    short = [kind.replace("_", "\n") for kind in metrics.kinds]

    fig, ax = plt.subplots(figsize=(7.5, 6.5))
    image = ax.imshow(metrics.confusion, cmap="Blues")
    ax.set_xticks(range(len(metrics.kinds)))
    ax.set_yticks(range(len(metrics.kinds)))
    ax.set_xticklabels(short, fontsize=7)
    ax.set_yticklabels(short, fontsize=7)
    ax.set_xlabel("predicted")
    ax.set_ylabel("gold")
    ax.set_title("Intent confusion matrix")
    peak = max((max(row) for row in metrics.confusion), default=0)
    for i, row in enumerate(metrics.confusion):
        for j, cell in enumerate(row):
            color = "white" if peak and cell > peak / 2 else "black"
            ax.text(j, i, str(cell), ha="center", va="center", fontsize=8, color=color)
    fig.colorbar(image, ax=ax, shrink=0.8)
    fig.tight_layout()
    confusion_path = os.path.join(out_dir, "confusion_matrix.png")
    fig.savefig(confusion_path, dpi=120)
    plt.close(fig)
    paths.append(confusion_path)

    fig, ax = plt.subplots(figsize=(8, 4.5))
    values = [metrics.per_class[kind]["f1"] for kind in metrics.kinds]
    values = [0.0 if isinstance(v, float) and math.isnan(v) else v for v in values]
    ax.bar(range(len(metrics.kinds)), values, color="#4878a8")
    ax.set_xticks(range(len(metrics.kinds)))
    ax.set_xticklabels(short, fontsize=7)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("F1")
    ax.set_title("Per-class F1")
    fig.tight_layout()
    f1_path = os.path.join(out_dir, "per_class_f1.png")
    fig.savefig(f1_path, dpi=120)
    plt.close(fig)
    paths.append(f1_path)
    return paths


def write_report(metrics: Metrics, logs: List[dict], out_dir: str) -> List[str]:
    """Write every report format plus figures and the per-record log."""
    os.makedirs(out_dir, exist_ok=True)
    written: List[str] = []
    for name, format in [("report.txt", "text"), ("report.json", "json"), ("report.csv", "csv")]:
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(render(metrics, format))
        written.append(path)
    records_path = os.path.join(out_dir, "records.jsonl")
    with open(records_path, "w", encoding="utf-8") as handle:
        for log in logs:
            handle.write(json.dumps(log, ensure_ascii=False, sort_keys=True) + "\n")
    written.append(records_path)
    written.extend(render_figures(metrics, out_dir))
    return written
