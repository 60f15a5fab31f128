"""End-to-end composition used by the command line."""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Mapping, Sequence

from .appraisal import THREE_LEVEL_VARIABLES, AppraisalVector, Variable, fuzzify
from .binning import Binner, BinnerKind, kmeans1d
from .config import BinningMode, RunConfig, load_bins
from .errors import DataError
from .inference import infer_all
from .io import AppraisalRecord
from .metrics import ConfusionMatrix, MetricsReport, acc2, acc3, confusion, report
from .pa_space import LABELS2, LABELS3, Label, aggregate_pleasure
from .rules import RULE_VARIABLES, RuleSet, load_rules

DIGITS = 6


def _r(x: float) -> float:
    # normalise -0.0 so output bytes do not depend on rounding direction
    return round(x, DIGITS) + 0.0


def rules_for(config: RunConfig) -> RuleSet:
    return load_rules(config.rules_path)


def infer_one(v: AppraisalVector, rules: RuleSet, config: RunConfig, explain: bool = False) -> dict:
    acts = infer_all(v, rules, config.fuzz)
    result = aggregate_pleasure(
        acts,
        config.intensity,
        eps=config.label3_eps,
        geometry=config.geometry,
        strength_weighted=config.strength_weighted,
    )
    out = {
        "utterance_id": v.utterance_id,
        "score": _r(result.score),
        "label2": result.label2.value,
        "label3": result.label3.value,
        "activations": [a.to_dict() for a in acts],
    }
    if result.no_activation:
        out["no_activation"] = True
    if explain:
        terms = {}
        for var in RULE_VARIABLES + (Variable.CALM, Variable.BOREDOM):
            terms[var.value] = [[t.term, _r(d)] for t, d in fuzzify(v.value(var), var, config.fuzz)]
        out["explain"] = {
            "inputs": {var.value: v.value(var) for var in RULE_VARIABLES + (Variable.CALM, Variable.BOREDOM)},
            "terms": terms,
            "fired_rules": sorted({a.source for a in acts if a.source != "direct"}),
            "contributions": [
                {
                    "emotion": c.emotion.value,
                    "intensity": c.intensity.value,
                    "pleasure": _r(c.pleasure),
                    "weight": _r(c.weight),
                }
                for c in result.contributions
            ],
        }
    return out


def run_infer(records: Iterable[AppraisalRecord], rules: RuleSet, config: RunConfig,
              explain: bool = False) -> list[dict]:
    """Inference for each record, in input order."""
    return [infer_one(rec.vector, rules, config, explain) for rec in records]


def render_infer(results: Sequence[dict], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["utterance_id", "score", "label2", "label3", "activations"])
        for r in results:
            acts = ";".join(f"{a['emotion']}:{a['intensity']}:{a['weight']}:{a['strength']}" for a in r["activations"])
            writer.writerow([r["utterance_id"], repr(r["score"]), r["label2"], r["label3"], acts])
        return buf.getvalue() if results else ""
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in results)


def evaluate_labels(pred: Mapping[str, Label], gold: Mapping[str, Label],
                    classes: int) -> tuple[ConfusionMatrix, MetricsReport]:
    """Align by utterance id and score predictions against gold labels."""
    if classes not in (2, 3):
        raise ValueError("classes must be 2 or 3")
    missing_pred = sorted(set(gold) - set(pred))
    missing_gold = sorted(set(pred) - set(gold))
    if missing_pred or missing_gold:
        parts = []
        if missing_pred:
            parts.append(f"no prediction for {missing_pred[:5]}")
        if missing_gold:
            parts.append(f"no gold label for {missing_gold[:5]}")
        raise DataError("utterance ids differ: " + "; ".join(parts))
    if not gold:
        raise DataError("nothing to evaluate")
    ids = sorted(gold)
    order = LABELS2 if classes == 2 else LABELS3
    cm = confusion([pred[i] for i in ids], [gold[i] for i in ids], order)
    return cm, report(cm)


def binner_for(variable: Variable, config: RunConfig, mode: BinningMode | None = None) -> Binner:
    mode = BinningMode(mode or config.binning_mode)
    if mode is BinningMode.KMEANS:
        return Binner(BinnerKind.BOUNDARIES, config.fuzz.boundaries[variable])
    if mode is BinningMode.FILE:
        bins = load_bins(config.bins_path)
        if variable not in bins:
            raise DataError(f"bins file has no boundaries for {variable.value}")
        return Binner(BinnerKind.BOUNDARIES, bins[variable])
    return Binner(BinnerKind(mode.value))


def appraisal_accuracy(records: Sequence[AppraisalRecord], config: RunConfig) -> dict:
    """ACC2 and ACC3 per appraisal variable that has gold values."""
    out = {}
    for var in (Variable.DESIRABILITY, *sorted(THREE_LEVEL_VARIABLES, key=lambda v: v.value)):
        pairs = [(r.vector.value(var), r.gold_values[var.value]) for r in records if var.value in r.gold_values]
        if not pairs:
            continue
        preds, golds = zip(*pairs)
        out[var.value] = {
            "n": len(pairs),
            "acc2": round(acc2(preds, golds), 4),
            "acc3": round(acc3(preds, golds, binner_for(var, config)), 4),
        }
    return {"binning_mode": config.binning_mode.value, "variables": out}


def fit_bins(columns: Mapping[str, Sequence[float]], k: int = 3) -> dict[str, list[float]]:
    return {name: [_r(b) for b in kmeans1d(values, k).boundaries] for name, values in columns.items()}
