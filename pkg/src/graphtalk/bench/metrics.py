"""Classification and execution metrics over the seven task kinds."""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from graphtalk.pipeline import INTENT_KINDS


def _safe_div(numerator: float, denominator: float) -> float:
    return numerator / denominator if denominator else 0.0


def _num(value: float):
    """NaN is not valid JSON; serialize it as null."""
    return None if isinstance(value, float) and math.isnan(value) else value


def _denum(value) -> float:
    return float("nan") if value is None else float(value)


@dataclass
class Metrics:
    confusion: List[List[int]]
    per_class: Dict[str, Dict[str, float]]
    accuracy: float
    macro_f1: float
    exec_success: float
    exec_success_on_correct: float
    total: int
    undefined: bool = False
    kinds: Tuple[str, ...] = INTENT_KINDS

    def to_dict(self) -> dict:
        return {
            "kinds": list(self.kinds),
            "confusion": [list(row) for row in self.confusion],
            "per_class": {
                kind: {key: _num(value) for key, value in stats.items()}
                for kind, stats in self.per_class.items()
            },
            "accuracy": _num(self.accuracy),
            "macro_f1": _num(self.macro_f1),
            "exec_success": _num(self.exec_success),
            "exec_success_on_correct": _num(self.exec_success_on_correct),
            "total": self.total,
            "undefined": self.undefined,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Metrics":
        return cls(
            confusion=[list(row) for row in data["confusion"]],
            per_class={
                kind: {key: _denum(value) for key, value in stats.items()}
                for kind, stats in data["per_class"].items()
            },
            accuracy=_denum(data["accuracy"]),
            macro_f1=_denum(data["macro_f1"]),
            exec_success=_denum(data["exec_success"]),
            exec_success_on_correct=_denum(data["exec_success_on_correct"]),
            total=int(data["total"]),
            undefined=bool(data["undefined"]),
            kinds=tuple(data["kinds"]),
        )


def compute_metrics(
    gold: Sequence[str], predicted: Sequence[str], exec_flags: Sequence[bool]
) -> Metrics:
    """Confusion-based accuracy, per-class P/R/F1, macro-F1, execution rates.

    Rows of the confusion matrix are gold classes, columns predictions.
    Zero denominators yield 0.0 per class; an empty input yields NaN
    metrics with the undefined flag set.
    """
    if not (len(gold) == len(predicted) == len(exec_flags)):
        raise ValueError("gold, predicted and exec_flags must have equal length")
    size = len(INTENT_KINDS)
    index = {kind: i for i, kind in enumerate(INTENT_KINDS)}
    for kind in list(gold) + list(predicted):
        if kind not in index:
            raise ValueError(f"unknown task kind {kind!r}")

    total = len(gold)
    if total == 0:
        nan = float("nan")
        return Metrics(
            confusion=[[0] * size for _ in range(size)],
            per_class={kind: {"precision": 0.0, "recall": 0.0, "f1": 0.0, "support": 0} for kind in INTENT_KINDS},
            accuracy=nan,
            macro_f1=nan,
            exec_success=nan,
            exec_success_on_correct=nan,
            total=0,
            undefined=True,
        )

    confusion = [[0] * size for _ in range(size)]
    for g, p in zip(gold, predicted):
        confusion[index[g]][index[p]] += 1

    per_class: Dict[str, Dict[str, float]] = {}
    f1_values: List[float] = []
    for kind in INTENT_KINDS:
        i = index[kind]
        tp = confusion[i][i]
        support = sum(confusion[i])
        predicted_as = sum(confusion[r][i] for r in range(size))
        precision = _safe_div(tp, predicted_as)
        recall = _safe_div(tp, support)
        f1 = _safe_div(2 * precision * recall, precision + recall)
        per_class[kind] = {"precision": precision, "recall": recall, "f1": f1, "support": support}
        if support > 0:
            f1_values.append(f1)

    accuracy = sum(confusion[i][i] for i in range(size)) / total
    macro_f1 = sum(f1_values) / len(f1_values) if f1_values else 0.0
    exec_success = sum(1 for flag in exec_flags if flag) / total
    correct_flags = [flag for g, p, flag in zip(gold, predicted, exec_flags) if g == p]
    exec_on_correct = (
        sum(1 for flag in correct_flags if flag) / len(correct_flags) if correct_flags else float("nan")
    )

    return Metrics(
        confusion=confusion,
        per_class=per_class,
        accuracy=accuracy,
        macro_f1=macro_f1,
        exec_success=exec_success,
        exec_success_on_correct=exec_on_correct,
        total=total,
    )
