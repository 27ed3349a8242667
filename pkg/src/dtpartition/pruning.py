"""Pruning: risk-bound pruning, CART cost-complexity pruning and a variant of
the latter with a VC-style complexity penalty (M-CART)."""
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .learner import DecisionTree, count_errors, fit
from .risk_bound import BoundConfig, epsilon

__all__ = [
    "PruneResult",
    "prune_with_bound",
    "weakest_link_sequence",
    "select_for_alpha",
    "mcart_penalty",
    "prune_cart",
    "prune_mcart",
]


@dataclass
class PruneResult:
    tree: DecisionTree
    leaves_before: int
    leaves_after: int
    wall_time: float
    bound_value: float | None = None
    chosen_alpha: float | None = None
    # bound of every accepted tree, starting with the input tree
    history: list = field(default_factory=list)


def prune_with_bound(tree, sample, cfg=None, table=None):
    """Greedy bound minimization.

    At each step every internal node is tried as a collapse point (preorder;
    a later candidate replaces an earlier one on equal bound). The best
    candidate is kept if its bound is no larger than the current tree's.
    `tree` must have been fit on `sample` so its leaf histograms give the
    training errors.
    """
    start = time.perf_counter()
    if cfg is None:
        cfg = BoundConfig()
    if table is None:
        table = cfg.make_table()
    m, n_classes, n_features = sample.m, sample.n_classes, sample.n_features

    def bound(t):
        return epsilon(m, t.train_errors(), t.structure, n_classes, n_features, cfg, table)

    leaves_before = tree.leaf_count
    current = bound(tree)
    history = [current]
    while not tree.is_leaf:
        best_tree, best = None, math.inf
        for path in tree.internal_paths():
            candidate = tree.collapse(path)
            value = bound(candidate)
            if value <= best:
                best_tree, best = candidate, value
        if best <= current:
            tree, current = best_tree, best
            history.append(current)
        else:
            break
    return PruneResult(tree, leaves_before, tree.leaf_count, time.perf_counter() - start,
                       bound_value=current, history=history)


def _cart_penalty(n_leaves):
    return n_leaves


def mcart_penalty(m, n_features):
    """Complexity term (d/m) ln(m/d) with d = L ln(L l); zero once d >= m."""
    def penalty(n_leaves):
        d = n_leaves * math.log(n_leaves * n_features) if n_leaves * n_features > 1 else 0.0
        if d <= 0 or d >= m:
            return 0.0
        return d / m * math.log(m / d)
    return penalty


def _subtree_stats(nd):
    """(training errors at the subtree's leaves, leaf count)."""
    if nd.is_leaf:
        return int(nd.counts.sum() - nd.counts.max()), 1
    el, ll = _subtree_stats(nd.left)
    er, lr = _subtree_stats(nd.right)
    return el + er, ll + lr


def weakest_link_sequence(tree, sample, penalty=None):
    """Nested cost-complexity sequence [(alpha_1, T_1), ..., (alpha_K, root leaf)].

    With the default penalty (leaf count) the link strength of a node is
    (R(node as leaf) - R(subtree)) / (leaves - 1) with R = errors / m. For
    another penalty the denominator is the drop in the whole tree's penalty
    caused by the collapse. Recorded alphas are made nondecreasing by a running
    max, which is a no-op for the leaf-count penalty.
    """
    if penalty is None:
        penalty = _cart_penalty
    m = sample.m
    out = []
    last_alpha = 0.0
    while not tree.is_leaf:
        total_leaves = tree.leaf_count
        best_path, best_g = None, math.inf
        for path in tree.internal_paths():
            nd = tree.node_at(path)
            sub_errors, sub_leaves = _subtree_stats(nd)
            leaf_errors = int(nd.counts.sum() - nd.counts.max())
            gain = (leaf_errors - sub_errors) / m
            drop = penalty(total_leaves) - penalty(total_leaves - sub_leaves + 1)
            if drop > 0:
                g = gain / drop
            else:
                g = 0.0 if gain <= 0 else math.inf
            if best_path is None or g < best_g - 1e-12:
                best_path, best_g = path, g
        tree = tree.collapse(best_path)
        last_alpha = max(last_alpha, best_g)
        out.append((last_alpha, tree))
    return out


def select_for_alpha(tree, sequence, alpha):
    """Subtree of the sequence that is optimal at complexity parameter alpha."""
    chosen = tree
    for a, t in sequence:
        if a <= alpha:
            chosen = t
        else:
            break
    return chosen


def _alpha_grid(sequence):
    alphas = [0.0] + [a for a, _ in sequence]
    grid = []
    for lo, hi in zip(alphas, alphas[1:]):
        if lo == 0.0:
            grid.append(0.0)
        elif math.isinf(hi):
            grid.append(math.inf)
        else:
            grid.append(math.sqrt(lo * hi))
    grid.append(math.inf)
    return grid


def _fold_indices(m, folds, seed):
    rng = np.random.Generator(np.random.PCG64(seed))
    return np.array_split(rng.permutation(m), folds)


def _prune_cv(tree, sample, folds, seed, max_leaves, penalty_for):
    start = time.perf_counter()
    if folds < 2:
        raise ValueError(f"folds must be >= 2, got {folds}")
    if sample.m < folds:
        raise ValueError(f"{sample.m} examples cannot be split into {folds} folds")
    sequence = weakest_link_sequence(tree, sample, penalty_for(sample.m))
    grid = _alpha_grid(sequence)
    accuracy = np.zeros(len(grid))
    for val_idx in _fold_indices(sample.m, folds, seed):
        mask = np.ones(sample.m, dtype=bool)
        mask[val_idx] = False
        train = sample.subset(np.flatnonzero(mask))
        val = sample.subset(val_idx)
        fold_tree = fit(train, max_leaves)
        fold_seq = weakest_link_sequence(fold_tree, train, penalty_for(train.m))
        for i, alpha in enumerate(grid):
            pruned = select_for_alpha(fold_tree, fold_seq, alpha)
            accuracy[i] += (1 - count_errors(pruned, val) / val.m) / folds
    best = 0
    for i in range(len(grid)):
        if accuracy[i] >= accuracy[best]:
            best = i
    alpha = grid[best]
    pruned = select_for_alpha(tree, sequence, alpha)
    return PruneResult(pruned, tree.leaf_count, pruned.leaf_count,
                       time.perf_counter() - start, chosen_alpha=alpha)


def prune_cart(tree, sample, folds=10, seed=0, max_leaves=40):
    """Cost-complexity pruning with alpha chosen by `folds`-fold cross-validation
    (ties go to the larger alpha)."""
    return _prune_cv(tree, sample, folds, seed, max_leaves, lambda m: _cart_penalty)


def prune_mcart(tree, sample, n_features=None, folds=10, seed=0, max_leaves=40):
    """Cost-complexity pruning with the (d/m) ln(m/d) penalty, d = L ln(L l)."""
    if n_features is None:
        n_features = sample.n_features
    return _prune_cv(tree, sample, folds, seed, max_leaves,
                     lambda m: mcart_penalty(m, n_features))
