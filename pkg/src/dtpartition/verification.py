"""Oracle-versus-bound checks at desk scale."""
import numpy as np

from .bound_engine import PartitionTable, partition_bound, stump_pi2_bound
from .combinatorics import binomial
from .oracle import (MAX_FEATURES, MAX_NODES, MAX_POINTS, ResourceLimitError,
                     random_distinct_sample, stump_partitions, tree_partitions_counts,
                     worst_case_sample)
from .tree_structure import STUMP, enumerate_structures

MAX_VERIFY_M = 9
MAX_VERIFY_ELL = 8


def _regime(m, n_features):
    if m <= 1:
        return "trivial"
    if 2 * n_features >= binomial(m, m // 2):
        return "2l>=C(m,m/2)"
    if 2 * n_features <= m:
        return "2l<=m"
    return "m<=7"


def small_structures(max_nodes=MAX_NODES):
    out = []
    for n_leaves in range(2, max_nodes + 2):
        out += enumerate_structures(n_leaves)
    return out


def run_verification(max_m, max_ell, trials=20, seed=0):
    """Run every check up to (max_m, max_ell); returns a JSON-ready report.

    Equality checks use the explicit worst-case samples (m <= 7 any l, and
    2l <= m). Soundness checks compare brute-force counts on random
    distinct-valued samples against the bounds, for stumps and for every shape
    with at most three internal nodes.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    checks = []
    skipped = []
    if max_m > MAX_VERIFY_M or max_ell > MAX_VERIFY_ELL:
        skipped.append(f"requested (m<={max_m}, l<={max_ell}) clipped to "
                       f"(m<={MAX_VERIFY_M}, l<={MAX_VERIFY_ELL})")
        max_m, max_ell = min(max_m, MAX_VERIFY_M), min(max_ell, MAX_VERIFY_ELL)

    for m in range(1, max_m + 1):
        for ell in range(1, max_ell + 1):
            if m > 7 and 2 * ell > m:
                continue
            oracle = len(stump_partitions(worst_case_sample(m, ell)))
            bound = stump_pi2_bound(m, ell)
            checks.append({"kind": "stump-equality", "m": m, "ell": ell,
                           "regime": _regime(m, ell), "oracle": oracle, "bound": bound,
                           "ok": oracle == bound})

    for m in range(1, max_m + 1):
        for ell in range(1, min(max_ell, MAX_FEATURES) + 1):
            bound = stump_pi2_bound(m, ell)
            worst = max(len(stump_partitions(random_distinct_sample(m, ell, rng)))
                        for _ in range(trials))
            checks.append({"kind": "stump-soundness", "m": m, "ell": ell,
                           "regime": "random", "oracle": worst, "bound": bound,
                           "ok": worst <= bound})

    table = PartitionTable()
    tree_m = min(max_m, 8)
    tree_ell = min(max_ell, 3)
    tree_trials = max(1, trials // 4)
    for t in small_structures():
        for m in range(1, tree_m + 1):
            for ell in range(1, tree_ell + 1):
                samples = [random_distinct_sample(m, ell, rng) for _ in range(tree_trials)]
                if m <= 7 or 2 * ell <= m:
                    samples.append(worst_case_sample(m, ell))
                worst = {c: 0 for c in range(1, 5)}
                try:
                    for s in samples:
                        for c, n in tree_partitions_counts(t, s, 4).items():
                            worst[c] = max(worst[c], n)
                except ResourceLimitError as err:
                    skipped.append(str(err))
                    continue
                for c in range(1, 5):
                    bound = partition_bound(t, c, m, ell, table)
                    checks.append({"kind": "tree-soundness", "structure": t.key, "c": c,
                                   "m": m, "ell": ell, "regime": "random",
                                   "oracle": worst[c], "bound": bound,
                                   "ok": worst[c] <= bound})

    # the stump bound must also be what the general recursion returns
    for m in range(1, max_m + 1):
        for ell in range(1, max_ell + 1):
            a, b = partition_bound(STUMP, 2, m, ell, table), stump_pi2_bound(m, ell)
            checks.append({"kind": "stump-recursion", "m": m, "ell": ell, "regime": _regime(m, ell),
                           "oracle": b, "bound": a, "ok": a == b})

    return {
        "max_m": max_m,
        "max_ell": max_ell,
        "checks": checks,
        "skipped": skipped,
        "n_checks": len(checks),
        "n_failed": sum(not c["ok"] for c in checks),
        "passed": all(c["ok"] for c in checks),
        "guard": {"nodes": MAX_NODES, "points": MAX_POINTS, "features": MAX_FEATURES},
    }


def format_verification(report):
    lines = []
    for c in report["checks"]:
        if c["kind"] == "tree-soundness" and c["ok"]:
            continue  # summarized below
        where = f"m={c['m']:<2} l={c['ell']:<2}"
        if "structure" in c:
            where += f" T={c['structure']} c={c['c']}"
        lines.append(f"{'ok  ' if c['ok'] else 'FAIL'} {c['kind']:<16} {where:<14} "
                     f"{c['regime']:<13} oracle={c['oracle']} bound={c['bound']}")
    n_tree = sum(c["kind"] == "tree-soundness" for c in report["checks"])
    lines.append(f"tree-soundness: {n_tree} checks on shapes with <= {MAX_NODES} internal nodes")
    for s in report["skipped"]:
        lines.append(f"skipped: {s}")
    lines.append(f"{report['n_checks'] - report['n_failed']}/{report['n_checks']} checks passed")
    return "\n".join(lines)
