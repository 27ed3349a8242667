"""Benchmark harness: repeated 75/25 splits, one grown tree per split, each
pruner applied to it, metrics aggregated per model."""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import data_io
from .learner import count_errors, fit
from .pruning import prune_cart, prune_mcart, prune_with_bound
from .risk_bound import BoundConfig

log = logging.getLogger(__name__)

MODELS = ("original", "cart", "mcart", "bound")
MAX_CLASSES = 10


@dataclass
class ModelSummary:
    model: str
    test_acc: list = field(default_factory=list)
    train_acc: list = field(default_factory=list)
    leaves: list = field(default_factory=list)
    height: list = field(default_factory=list)
    wall_time: list = field(default_factory=list)
    bound: list = field(default_factory=list)
    failures: int = 0

    def add(self, record):
        self.test_acc.append(record.test_acc)
        self.train_acc.append(record.train_acc)
        self.leaves.append(record.leaves)
        self.height.append(record.height)
        self.wall_time.append(record.wall_time)
        if record.bound is not None:
            self.bound.append(record.bound)

    def stats(self, timing=False):
        def ms(values):
            if not values:
                return None
            arr = np.asarray(values, dtype=float)
            return {"mean": float(arr.mean()), "std": float(arr.std())}

        out = {
            "model": self.model,
            "repetitions": len(self.test_acc),
            "failures": self.failures,
            "test_acc": ms(self.test_acc),
            "train_acc": ms(self.train_acc),
            "leaves": ms(self.leaves),
            "height": ms(self.height),
            "bound": ms(self.bound),
        }
        if timing:
            out["time"] = ms(self.wall_time)
        return out


@dataclass
class RunReport:
    dataset: str
    repetitions: int
    models: dict
    records: list

    def to_dict(self, timing=False):
        return {
            "dataset": self.dataset,
            "repetitions": self.repetitions,
            "models": [s.stats(timing) for s in self.models.values()],
        }


def _record(name, model, seed, tree, train, test, elapsed, bound=None):
    return data_io.RunRecord(
        dataset=name, model=model, seed=seed,
        train_acc=1 - count_errors(tree, train) / train.m,
        test_acc=1 - count_errors(tree, test) / test.m,
        leaves=tree.leaf_count, height=tree.height,
        wall_time=elapsed, bound=bound)


def run_repetition(sample, name, models, cfg, seed, max_leaves=40, folds=10):
    """One split of `sample`; returns {model: RunRecord or exception message}."""
    train, test = data_io.split(sample, 0.75, seed)
    start = time.perf_counter()
    tree = fit(train, max_leaves)
    grow_time = time.perf_counter() - start
    out = {}
    for model in models:
        try:
            if model == "original":
                out[model] = _record(name, model, seed, tree, train, test, grow_time)
            elif model == "cart":
                res = prune_cart(tree, train, folds=folds, seed=seed, max_leaves=max_leaves)
                out[model] = _record(name, model, seed, res.tree, train, test, res.wall_time)
            elif model == "mcart":
                res = prune_mcart(tree, train, train.n_features, folds=folds, seed=seed,
                                  max_leaves=max_leaves)
                out[model] = _record(name, model, seed, res.tree, train, test, res.wall_time)
            elif model == "bound":
                res = prune_with_bound(tree, train, cfg)
                out[model] = _record(name, model, seed, res.tree, train, test, res.wall_time,
                                     bound=res.bound_value)
            else:
                raise ValueError(f"unknown model {model!r}")
        except Exception as err:  # a failing pruner must not sink the whole run
            log.warning("%s seed %d: %s failed: %s", name, seed, model, err)
            out[model] = f"{type(err).__name__}: {err}"
    return out


def run_experiment(spec, repetitions=25, models=MODELS, cfg=None, base_seed=0,
                   out_dir=None, max_leaves=40, folds=10, jobs=1):
    """Run `repetitions` splits (seeds base_seed, base_seed + 1, ...)."""
    if cfg is None:
        cfg = BoundConfig()
    sample = data_io.load(spec)
    if sample.n_classes > MAX_CLASSES:
        raise data_io.DatasetError(
            f"{spec.display_name} has {sample.n_classes} classes; at most {MAX_CLASSES} are supported")
    name = spec.display_name
    seeds = [base_seed + r for r in range(repetitions)]
    args = [(sample, name, tuple(models), cfg, s, max_leaves, folds) for s in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(run_repetition, *zip(*args)))
    else:
        results = [run_repetition(*a) for a in args]

    summaries = {m: ModelSummary(m) for m in models}
    records = []
    for per_model in results:  # ordered by repetition index
        for model in models:
            rec = per_model[model]
            if isinstance(rec, str):
                summaries[model].failures += 1
                continue
            summaries[model].add(rec)
            records.append(rec)
            if out_dir is not None:
                data_io.write_result(rec, out_dir)
    return RunReport(name, repetitions, summaries, records)


def format_report(report, markdown=False, timing=False):
    """Table-1-style rows, one per model."""
    headers = ["model", "test acc", "train acc", "leaves", "height", "bound"]
    if timing:
        headers.append("time (s)")
    rows = []
    for s in report.to_dict(timing)["models"]:
        def cell(key, digits=3):
            v = s[key]
            return "-" if v is None else f"{v['mean']:.{digits}f} ± {v['std']:.{digits}f}"
        row = [s["model"], cell("test_acc"), cell("train_acc"), cell("leaves", 1),
               cell("height", 1), cell("bound")]
        if timing:
            row.append(cell("time", 2))
        rows.append(row)
    title = f"{report.dataset} ({report.repetitions} repetitions)"
    if markdown:
        lines = [f"**{title}**", "", "| " + " | ".join(headers) + " |",
                 "|" + "|".join("---" for _ in headers) + "|"]
        lines += ["| " + " | ".join(r) + " |" for r in rows]
        return "\n".join(lines)
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(headers)]
    lines = [title, "  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    lines += ["  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows]
    return "\n".join(line.rstrip() for line in lines)
