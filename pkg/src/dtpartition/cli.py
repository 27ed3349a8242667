"""Command-line interface: ``dtpartition <subcommand> ...``."""
import argparse
import json
import logging
import os
import sys

from . import data_io
from .bound_engine import (PartitionTable, growth_bound, stump_vcdim_exact,
                           vcdim_upper_bound)
from .experiment import MODELS, format_report, run_experiment
from .learner import count_errors, parse_tree
from .pruning import prune_cart, prune_mcart, prune_with_bound
from .risk_bound import DEFAULT_R, BoundConfig
from .tree_structure import figure2_structures, parse_structure
from .verification import format_verification, run_verification


def _table(args, fast):
    table = PartitionTable(fast=fast)
    path = getattr(args, "cache", None)
    if path and os.path.exists(path):
        table.load(path)
    return table


def _save_table(args, table):
    path = getattr(args, "cache", None)
    if path:
        table.save(path)


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _structure(text):
    try:
        return parse_structure(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def cmd_vcdim(args):
    if args.stump_exact:
        value = stump_vcdim_exact(args.ell)
    else:
        table = _table(args, args.fast)
        value = vcdim_upper_bound(args.structure, args.ell, table)
        _save_table(args, table)
    _emit(args, {"structure": args.structure.key, "ell": args.ell, "vcdim_upper_bound": value},
          str(value))
    return 0


def cmd_pibound(args):
    table = _table(args, args.fast)
    value = table.bound(args.structure, args.c, args.m, args.ell)
    _save_table(args, table)
    _emit(args, {"structure": args.structure.key, "c": args.c, "m": args.m, "ell": args.ell,
                 "mode": table.mode, "bound": str(value)}, str(value))
    return 0


def cmd_growth(args):
    table = _table(args, args.fast)
    value = growth_bound(args.structure, args.m, args.classes, args.ell, table)
    _save_table(args, table)
    _emit(args, {"structure": args.structure.key, "m": args.m, "classes": args.classes,
                 "ell": args.ell, "mode": table.mode, "bound": str(value)}, str(value))
    return 0


def figure2_rows(n_features, table=None):
    if table is None:
        table = PartitionTable()
    return [(t.key, t.leaf_count, vcdim_upper_bound(t, n_features, table))
            for t in figure2_structures()]


def cmd_figure2(args):
    table = _table(args, False)
    rows = figure2_rows(args.ell, table)
    _save_table(args, table)
    if args.md:
        lines = ["| structure | leaves | VCdim upper bound |", "|---|---|---|"]
        lines += [f"| `{k}` | {n} | {v} |" for k, n, v in rows]
    else:
        width = max(len(k) for k, _, _ in rows)
        lines = [f"{'structure'.ljust(width)}  leaves  vcdim_ub"]
        lines += [f"{k.ljust(width)}  {n:>6}  {v:>8}" for k, n, v in rows]
    _emit(args, {"ell": args.ell,
                 "rows": [{"structure": k, "leaves": n, "vcdim_upper_bound": v} for k, n, v in rows]},
          "\n".join(lines))
    return 0


def cmd_verify(args):
    report = run_verification(args.max_m, args.max_ell, trials=args.trials, seed=args.seed)
    _emit(args, report, format_verification(report))
    return 0 if report["passed"] else 1


def _dataset_spec(args):
    if args.dataset in ("iris", "wine") and not os.path.exists(args.dataset):
        return data_io.bundled(args.dataset)
    label = args.label_column
    if label is None:
        label = -1
    return data_io.DatasetSpec(args.dataset, label, args.delimiter, args.header,
                               args.name or "")


def _config(args):
    return BoundConfig(delta=args.delta, r=args.r, fast=args.fast_bound)


def cmd_experiment(args):
    models = [m.strip() for m in args.models.split(",") if m.strip()]
    unknown = set(models) - set(MODELS)
    if unknown:
        print(f"error: unknown models {sorted(unknown)}; choose from {MODELS}", file=sys.stderr)
        return 2
    try:
        report = run_experiment(_dataset_spec(args), args.reps, models, _config(args), args.seed,
                                out_dir=args.out, max_leaves=args.max_leaves, folds=args.folds,
                                jobs=args.jobs)
    except data_io.DatasetError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    _emit(args, report.to_dict(args.timing), format_report(report, args.md, args.timing))
    return 0 if all(s.failures == 0 for s in report.models.values()) else 1


def cmd_prune(args):
    try:
        sample = data_io.load(_dataset_spec(args))
        tree = parse_tree(args.tree, sample.n_features, sample.n_classes).with_sample(sample)
    except (data_io.DatasetError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    if args.method == "bound":
        res = prune_with_bound(tree, sample, _config(args))
    elif args.method == "cart":
        res = prune_cart(tree, sample, folds=args.folds, seed=args.seed, max_leaves=args.max_leaves)
    else:
        res = prune_mcart(tree, sample, folds=args.folds, seed=args.seed, max_leaves=args.max_leaves)
    payload = {"tree": res.tree.to_text(), "leaves_before": res.leaves_before,
               "leaves_after": res.leaves_after, "bound": res.bound_value,
               "alpha": res.chosen_alpha, "train_errors": count_errors(res.tree, sample)}
    _emit(args, payload, res.tree.to_text())
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dtpartition",
        description="Partition-function bounds, VC dimension bounds and bound-based pruning "
                    "for binary decision trees.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, cache=True):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if cache:
            p.add_argument("--cache", help="partition table cache file (read, then rewritten)")

    p = sub.add_parser("vcdim", help="upper bound on the VC dimension of a tree shape")
    p.add_argument("structure", type=_structure, help="e.g. '(LL)' or '((LL)L)'")
    p.add_argument("--ell", type=int, required=True, help="number of real-valued features")
    p.add_argument("--stump-exact", action="store_true", help="exact stump VC dimension")
    p.add_argument("--fast", action="store_true", help="use the looser fast bound")
    common(p)
    p.set_defaults(func=cmd_vcdim)

    p = sub.add_parser("pibound", help="bound on the c-partitioning function")
    p.add_argument("structure", type=_structure)
    p.add_argument("--c", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--fast", action="store_true")
    common(p)
    p.set_defaults(func=cmd_pibound)

    p = sub.add_parser("growth", help="bound on the growth function")
    p.add_argument("structure", type=_structure)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--classes", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--fast", action="store_true")
    common(p)
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("figure2", help="VC bounds of the 11 shapes of height <= 3")
    p.add_argument("--ell", type=int, default=10)
    p.add_argument("--md", action="store_true", help="markdown table")
    common(p)
    p.set_defaults(func=cmd_figure2)

    p = sub.add_parser("verify", help="brute-force checks of the stump and tree bounds")
    p.add_argument("--max-m", type=int, default=7)
    p.add_argument("--max-ell", type=int, default=5)
    p.add_argument("--trials", type=int, default=20, help="random samples per configuration")
    p.add_argument("--seed", type=int, default=0)
    common(p, cache=False)
    p.set_defaults(func=cmd_verify)

    def data_args(p):
        p.add_argument("--dataset", required=True, help="CSV path, or 'iris' / 'wine'")
        p.add_argument("--label-column", help="index or header name (default: last column)")
        p.add_argument("--delimiter", default=",")
        p.add_argument("--header", action="store_true", help="first row is a header")
        p.add_argument("--name", help="dataset name used in reports")
        p.add_argument("--delta", type=float, default=0.05)
        p.add_argument("--r", type=float, default=DEFAULT_R)
        p.add_argument("--fast-bound", dest="fast_bound", action="store_true", default=True)
        p.add_argument("--exact-bound", dest="fast_bound", action="store_false")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--folds", type=int, default=10)
        p.add_argument("--max-leaves", type=int, default=40)

    p = sub.add_parser("experiment", help="benchmark the pruners on repeated random splits")
    data_args(p)
    p.add_argument("--reps", type=int, default=25)
    p.add_argument("--models", default=",".join(MODELS))
    p.add_argument("--out", help="directory for per-run JSON files")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--md", action="store_true")
    p.add_argument("--timing", action="store_true", help="include wall times")
    common(p, cache=False)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("prune", help="prune one serialized tree on a dataset")
    p.add_argument("--tree", required=True, help="e.g. '(0:2.45 L=0 (3:1.75 L=1 L=2))'")
    p.add_argument("--method", choices=("bound", "cart", "mcart"), default="bound")
    data_args(p)
    common(p, cache=False)
    p.set_defaults(func=cmd_prune)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
