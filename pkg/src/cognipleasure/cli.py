"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import fusion
from .appraisal import APPRAISAL_FIELDS
from .config import BinningMode, ConfigError, load_config
from .errors import CogniPleasureError
from .io import load_appraisals, read_column, read_labels
from .pipeline import appraisal_accuracy, evaluate_labels, fit_bins, render_infer, rules_for, run_infer
from .rules import load_rules, validate

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _config(args):
    cfg = load_config(args.config)
    if getattr(args, "rules", None):
        cfg = cfg.replace(rules_path=Path(args.rules))
    return cfg


def cmd_infer(args) -> int:
    cfg = _config(args)
    if args.format:
        cfg = cfg.replace(output_format=args.format)
    rules = rules_for(cfg)
    records = load_appraisals(args.input)
    results = run_infer(records, rules, cfg, explain=args.explain)
    _emit(render_infer(results, cfg.output_format), args.out)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    cfg = _config(args)
    if args.input:
        changes = {}
        if args.binning:
            changes["binning_mode"] = BinningMode(args.binning)
        if args.bins:
            changes["bins_path"] = Path(args.bins)
        cfg = cfg.replace(**changes)
        _emit(_dump(appraisal_accuracy(load_appraisals(args.input), cfg)), args.out)
        return EXIT_OK

    if not args.pred:
        raise ConfigError("evaluate needs --pred (and --gold), or --input for appraisal accuracy")
    gold_path = args.gold or args.pred
    pred = read_labels(args.pred, args.classes, prefer="pred")
    gold = read_labels(gold_path, args.classes, prefer="gold")
    cm, rep = evaluate_labels(pred, gold, args.classes)
    doc = {"classes": args.classes, **rep.to_dict(), "confusion": cm.to_dict()}
    _emit(_dump(doc), args.out)
    confusion_path = args.confusion or (str(Path(args.out).with_suffix(".confusion.csv")) if args.out else None)
    if confusion_path:
        Path(confusion_path).write_text(cm.to_csv(), encoding="utf-8")
    return EXIT_OK


def cmd_bins_fit(args) -> int:
    columns = args.column or [v.value for v in APPRAISAL_FIELDS if v.value != "agency"]
    data = {name: read_column(args.input, name) for name in columns}
    _emit(_dump(fit_bins(data, args.k)), args.out)
    return EXIT_OK


def cmd_rules_validate(args) -> int:
    path = args.path or args.rules
    rs = load_rules(path)
    rep = validate(rs)
    _emit(_dump({"path": str(path) if path else "<canonical>", **rep.to_dict()}), args.out)
    return EXIT_OK


def cmd_fusion_demo(args) -> int:
    rng = np.random.default_rng(args.seed)
    d_in = {"a": args.d_in, "v": args.d_in}
    params = fusion.init_params(rng, d_in, args.d, n_heads=args.heads)
    lengths = {"a": args.t_a, "v": args.t_v}
    seqs = {}
    for m, T in lengths.items():
        mask = np.ones(T, dtype=bool)
        mask[max(1, T - T // 4):] = False  # pad the tail quarter
        seqs[m] = fusion.ModalitySequence(m, rng.normal(size=(T, d_in[m])), mask)
    out = fusion.forward(seqs, params)
    target = rng.uniform(0.0, 5.0, size=fusion.N_OUTPUTS)
    loss = fusion.multitask_loss(out.unimodal, out.fused, target, params.alpha)

    print(f"seed={args.seed} d={params.d} d_model={params.d_model} heads={args.heads}")
    for m, seq in seqs.items():
        w = out.cross_weights[m]
        masked_mass = float(w[:, ~np.concatenate([seqs[o].mask for o in seqs if o != m])].sum())
        print(
            f"[{m}] input={seq.features.shape} cross_weights={w.shape} "
            f"row_sum_max_err={float(np.abs(w.sum(axis=1) - 1).max()):.3e} "
            f"masked_weight={masked_mass:.1e} cls={out.cls[m].shape}"
        )
    print(f"fused_width={out.widths['fused']} output={np.array2string(out.fused, precision=4)}")
    print(f"loss={loss:.6f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration (default: $COGNIPLEASURE_CONFIG)")
    common.add_argument("--rules", help="rule file (default: the shipped decision tree)")
    common.add_argument("--out", help="output path (default: stdout)")

    parser = _Parser(prog="cognipleasure", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("infer", parents=[common], help="appraisal CSV to per-utterance pleasure")
    p.add_argument("--input", required=True)
    p.add_argument("--explain", action="store_true", help="include terms, fired rules and contributions")
    p.add_argument("--format", choices=["json", "csv"], help="override output_format")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("evaluate", parents=[common], help="metrics and confusion matrix")
    p.add_argument("--pred", help="inference report (.jsonl) or CSV with label columns")
    p.add_argument("--gold", help="gold labels (default: gold columns of --pred)")
    p.add_argument("--classes", type=int, choices=[2, 3], default=2)
    p.add_argument("--confusion", help="confusion CSV path (default: next to --out)")
    p.add_argument("--input", help="appraisal CSV with gold_<variable> columns: per-variable ACC2/ACC3")
    p.add_argument("--binning", choices=[m.value for m in BinningMode])
    p.add_argument("--bins", help="boundaries JSON from 'bins fit' (binning mode 'file')")
    p.set_defaults(func=cmd_evaluate)

    bins = sub.add_parser("bins", help="data-driven bin boundaries").add_subparsers(
        dest="bins_command", required=True, parser_class=_Parser)
    p = bins.add_parser("fit", parents=[common], help="exact 1-D k-means boundaries per column")
    p.add_argument("--input", required=True)
    p.add_argument("--column", action="append", help="column to fit (repeatable; default: all appraisal columns)")
    p.add_argument("--k", type=int, default=3)
    p.set_defaults(func=cmd_bins_fit)

    rules = sub.add_parser("rules", help="rule file tools").add_subparsers(
        dest="rules_command", required=True, parser_class=_Parser)
    p = rules.add_parser("validate", parents=[common], help="parse and check a rule file")
    p.add_argument("path", nargs="?")
    p.set_defaults(func=cmd_rules_validate)

    fus = sub.add_parser("fusion", help="forward-only fusion toy").add_subparsers(
        dest="fusion_command", required=True, parser_class=_Parser)
    p = fus.add_parser("demo", help="run the fusion forward pass on synthetic sequences")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t-a", type=int, default=6)
    p.add_argument("--t-v", type=int, default=4)
    p.add_argument("--d", type=int, default=8)
    p.add_argument("--d-in", type=int, default=5)
    p.add_argument("--heads", type=int, default=4)
    p.set_defaults(func=cmd_fusion_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"cognipleasure: config error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except CogniPleasureError as exc:
        print(f"cognipleasure: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, ValueError) as exc:
        print(f"cognipleasure: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
