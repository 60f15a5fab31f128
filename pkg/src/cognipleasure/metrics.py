"""Accuracy after binning, confusion matrices and precision/recall/F1 reports."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

from .binning import bin_binary


def acc3(preds: Sequence[float], golds: Sequence[float], binner: Callable[[float], Hashable]) -> float:
    """Fraction of samples whose prediction and gold land in the same bin."""
    if len(preds) != len(golds):
        raise ValueError(f"length mismatch: {len(preds)} predictions vs {len(golds)} gold values")
    if not preds:
        raise ValueError("acc3 needs at least one sample")
    hits = sum(binner(p) == binner(g) for p, g in zip(preds, golds))
    return hits / len(preds)


def acc2(preds: Sequence[float], golds: Sequence[float]) -> float:
    return acc3(preds, golds, bin_binary)


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts with rows indexed by the true label and columns by the predicted one."""

    labels: tuple[str, ...]
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        labels = tuple(str(lbl) for lbl in self.labels)
        counts = tuple(tuple(int(c) for c in row) for row in self.counts)
        if len(set(labels)) != len(labels):
            raise ValueError("confusion labels must be unique")
        if len(counts) != len(labels) or any(len(row) != len(labels) for row in counts):
            raise ValueError("counts must be a square grid matching the labels")
        if any(c < 0 for row in counts for c in row):
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "counts", counts)

    @property
    def total(self) -> int:
        return sum(map(sum, self.counts))

    @property
    def supports(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.counts)

    @property
    def predicted_totals(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.counts))

    def permuted(self, order: Sequence[str]) -> ConfusionMatrix:
        idx = [self.labels.index(lbl) for lbl in order]
        return ConfusionMatrix(tuple(order), tuple(tuple(self.counts[i][j] for j in idx) for i in idx))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["true\\pred", *self.labels])
        for lbl, row in zip(self.labels, self.counts):
            writer.writerow([lbl, *row])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"labels": list(self.labels), "counts": [list(r) for r in self.counts]}


def confusion(pred_labels: Sequence, gold_labels: Sequence, label_order: Sequence) -> ConfusionMatrix:
    if len(pred_labels) != len(gold_labels):
        raise ValueError(f"length mismatch: {len(pred_labels)} predictions vs {len(gold_labels)} gold labels")
    index = {lbl: i for i, lbl in enumerate(label_order)}
    grid = [[0] * len(index) for _ in index]
    for k, (p, g) in enumerate(zip(pred_labels, gold_labels)):
        for lbl in (p, g):
            if lbl not in index:
                raise ValueError(f"sample {k}: unknown label {lbl!r}")
        grid[index[g]][index[p]] += 1
    return ConfusionMatrix(tuple(str(getattr(lbl, "value", lbl)) for lbl in label_order), tuple(map(tuple, grid)))


@dataclass(frozen=True)
class ClassScores:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class Averages:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class MetricsReport:
    per_class: dict[str, ClassScores]
    macro: Averages
    weighted: Averages
    accuracy: float
    n: int
    # (label, metric) pairs whose denominator was zero and were scored 0
    zero_division: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    def to_dict(self, digits: int | None = 4) -> dict:
        rnd = (lambda x: round(x, digits)) if digits is not None else (lambda x: x)
        return {
            "accuracy": rnd(self.accuracy),
            "n": self.n,
            "per_class": {
                lbl: {
                    "precision": rnd(s.precision),
                    "recall": rnd(s.recall),
                    "f1": rnd(s.f1),
                    "support": s.support,
                }
                for lbl, s in self.per_class.items()
            },
            "macro": {k: rnd(getattr(self.macro, k)) for k in ("precision", "recall", "f1")},
            "weighted": {k: rnd(getattr(self.weighted, k)) for k in ("precision", "recall", "f1")},
            "zero_division": [list(z) for z in self.zero_division],
        }


def _ratio(num: int, den: int, flag: tuple[str, str], flags: list) -> float:
    if den == 0:
        flags.append(flag)
        return 0.0
    return num / den


def report(cm: ConfusionMatrix) -> MetricsReport:
    """Per-class, macro and support-weighted precision, recall and F1.

    Weighted F1 is the support-weighted mean of per-class F1 scores.
    """
    n = cm.total
    if n == 0:
        raise ValueError("cannot report on an empty confusion matrix")
    flags: list[tuple[str, str]] = []
    per_class = {}
    for i, lbl in enumerate(cm.labels):
        tp = cm.counts[i][i]
        p = _ratio(tp, cm.predicted_totals[i], (lbl, "precision"), flags)
        r = _ratio(tp, cm.supports[i], (lbl, "recall"), flags)
        f1 = 0.0 if p + r == 0 else 2 * p * r / (p + r)
        per_class[lbl] = ClassScores(p, r, f1, cm.supports[i])

    scores = list(per_class.values())
    k = len(scores)
    macro = Averages(
        sum(s.precision for s in scores) / k,
        sum(s.recall for s in scores) / k,
        sum(s.f1 for s in scores) / k,
    )
    weighted = Averages(
        sum(s.precision * s.support for s in scores) / n,
        sum(s.recall * s.support for s in scores) / n,
        sum(s.f1 * s.support for s in scores) / n,
    )
    accuracy = sum(cm.counts[i][i] for i in range(k)) / n
    return MetricsReport(per_class, macro, weighted, accuracy, n, tuple(flags))
