"""Greedy binary decision trees on real-valued features (Gini criterion).

Routing convention: a point goes to the left child iff ``x[feature] <= threshold``.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .tree_structure import LEAF, TreeStructure

__all__ = [
    "Sample",
    "TreeNode",
    "DecisionTree",
    "fit",
    "predict",
    "count_errors",
    "parse_tree",
]


@dataclass(frozen=True)
class Sample:
    """m examples with l real-valued features and labels in 0..n_classes-1."""

    x: np.ndarray
    y: np.ndarray
    n_classes: int
    feature_names: tuple | None = None

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=int)
        if x.ndim != 2:
            raise ValueError(f"features must be a 2-d array, got shape {x.shape}")
        if x.shape[0] < 1 or x.shape[1] < 1:
            raise ValueError(f"need m >= 1 and l >= 1, got shape {x.shape}")
        if y.shape != (x.shape[0],):
            raise ValueError(f"{y.shape[0] if y.ndim else 0} labels for {x.shape[0]} examples")
        if self.n_classes < 1 or y.min() < 0 or y.max() >= self.n_classes:
            raise ValueError(f"labels must lie in [0, {self.n_classes})")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def m(self):
        return self.x.shape[0]

    @property
    def n_features(self):
        return self.x.shape[1]

    def subset(self, indices):
        indices = np.asarray(indices, dtype=int)
        return Sample(self.x[indices], self.y[indices], self.n_classes, self.feature_names)


@dataclass(frozen=True, eq=False)
class TreeNode:
    """Internal node when ``feature`` is set, leaf otherwise.

    ``counts`` is the class histogram of the training points that reach the
    node and ``indices`` their row numbers; both are None for trees that were
    parsed from text and never routed a sample.
    """

    feature: int | None = None
    threshold: float | None = None
    left: TreeNode | None = None
    right: TreeNode | None = None
    counts: np.ndarray | None = None
    indices: np.ndarray | None = None
    leaf_label: int | None = None

    @property
    def is_leaf(self):
        return self.feature is None

    @property
    def label(self):
        if self.leaf_label is not None:
            return self.leaf_label
        if self.counts is None:
            raise ValueError("node has neither a label nor a class histogram")
        return int(np.argmax(self.counts))  # first max: ties go to the smallest class

    @property
    def n_points(self):
        return 0 if self.counts is None else int(self.counts.sum())

    def as_leaf(self):
        """The node with its subtree replaced by a majority-vote leaf."""
        label = int(np.argmax(self.counts)) if self.counts is not None else self.label
        return TreeNode(counts=self.counts, indices=self.indices, leaf_label=label)


@dataclass(frozen=True, eq=False)
class DecisionTree:
    root: TreeNode
    n_features: int
    n_classes: int
    _structure: TreeStructure | None = field(default=None, repr=False)

    @property
    def structure(self):
        if self._structure is None:
            object.__setattr__(self, "_structure", _structure_of(self.root))
        return self._structure

    @property
    def leaf_count(self):
        return self.structure.leaf_count

    @property
    def height(self):
        return self.structure.height

    @property
    def is_leaf(self):
        return self.root.is_leaf

    def internal_paths(self):
        """Paths ('' for the root, then 'l'/'r' steps) of internal nodes in preorder."""
        out = []
        stack = [("", self.root)]
        while stack:
            path, nd = stack.pop()
            if nd.is_leaf:
                continue
            out.append(path)
            stack.append((path + "r", nd.right))
            stack.append((path + "l", nd.left))
        return out

    def node_at(self, path):
        nd = self.root
        for step in path:
            nd = nd.left if step == "l" else nd.right
        return nd

    def collapse(self, path):
        """New tree with the subtree at `path` replaced by a majority leaf."""
        def rebuild(nd, rest):
            if not rest:
                return nd.as_leaf()
            if rest[0] == "l":
                return replace(nd, left=rebuild(nd.left, rest[1:]))
            return replace(nd, right=rebuild(nd.right, rest[1:]))

        return DecisionTree(rebuild(self.root, path), self.n_features, self.n_classes)

    def leaves(self):
        stack = [self.root]
        while stack:
            nd = stack.pop()
            if nd.is_leaf:
                yield nd
            else:
                stack.append(nd.right)
                stack.append(nd.left)

    def train_errors(self):
        """Errors on the training sample, read off the cached leaf histograms."""
        errors = 0
        for leaf in self.leaves():
            if leaf.counts is None:
                raise ValueError("tree has no training histograms")
            errors += int(leaf.counts.sum() - leaf.counts[leaf.label])
        return errors

    def predict(self, x):
        return predict(self, x)

    def predict_many(self, x):
        x = np.asarray(x, dtype=float)
        out = np.empty(x.shape[0], dtype=int)
        for j in range(x.shape[0]):
            out[j] = predict(self, x[j])
        return out

    def with_sample(self, sample):
        """Re-route `sample` through the splits and refresh every node's
        histogram. Leaves keep their labels."""
        def route(nd, idx):
            counts = np.bincount(sample.y[idx], minlength=self.n_classes)
            if nd.is_leaf:
                return TreeNode(counts=counts, indices=idx, leaf_label=nd.label)
            go_left = sample.x[idx, nd.feature] <= nd.threshold
            return TreeNode(nd.feature, nd.threshold,
                            route(nd.left, idx[go_left]), route(nd.right, idx[~go_left]),
                            counts=counts, indices=idx)

        if sample.n_features != self.n_features:
            raise ValueError(f"tree uses {self.n_features} features, sample has {sample.n_features}")
        return DecisionTree(route(self.root, np.arange(sample.m)), self.n_features,
                            max(self.n_classes, sample.n_classes))

    def to_text(self):
        """``(i:theta left right)`` at nodes and ``L=label`` at leaves."""
        def rec(nd):
            if nd.is_leaf:
                return f"L={nd.label}"
            return f"({nd.feature}:{nd.threshold!r} {rec(nd.left)} {rec(nd.right)})"

        return rec(self.root)

    def __str__(self):
        return self.to_text()


def _structure_of(nd):
    if nd.is_leaf:
        return LEAF
    return TreeStructure(_structure_of(nd.left), _structure_of(nd.right))


def parse_tree(text, n_features=None, n_classes=None):
    """Inverse of :meth:`DecisionTree.to_text`."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0
    max_feature = -1
    max_label = -1

    def rec():
        nonlocal pos, max_feature, max_label
        if pos >= len(tokens):
            raise ValueError("unexpected end of tree text")
        tok = tokens[pos]
        pos += 1
        if tok.startswith("L="):
            label = int(tok[2:])
            max_label = max(max_label, label)
            return TreeNode(leaf_label=label)
        if tok != "(":
            raise ValueError(f"unexpected token {tok!r}")
        rule = tokens[pos]
        pos += 1
        feature, _, threshold = rule.partition(":")
        feature = int(feature)
        max_feature = max(max_feature, feature)
        left = rec()
        right = rec()
        if pos >= len(tokens) or tokens[pos] != ")":
            raise ValueError("expected ')'")
        pos += 1
        return TreeNode(feature, float(threshold), left, right)

    root = rec()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens in tree text: {tokens[pos:]}")
    if n_features is None:
        n_features = max_feature + 1
    elif max_feature >= n_features:
        raise ValueError(f"tree uses feature {max_feature} but there are {n_features} features")
    if n_classes is None:
        n_classes = max_label + 1
    elif max_label >= n_classes:
        raise ValueError(f"tree uses label {max_label} but there are {n_classes} classes")
    return DecisionTree(root, max(n_features, 1), max(n_classes, 1))


def predict(tree, x):
    """Label of the leaf that `x` reaches."""
    x = np.asarray(x, dtype=float)
    if x.shape != (tree.n_features,):
        raise ValueError(f"expected {tree.n_features} features, got shape {x.shape}")
    nd = tree.root
    while not nd.is_leaf:
        nd = nd.left if x[nd.feature] <= nd.threshold else nd.right
    return nd.label


def count_errors(tree, sample):
    return int(np.sum(tree.predict_many(sample.x) != sample.y))


class _Growing:
    """Mutable node used while growing; frozen into TreeNode at the end."""

    __slots__ = ("indices", "counts", "split", "gain", "left", "right")

    def __init__(self, indices, counts):
        self.indices = indices
        self.counts = counts
        self.split = None
        self.gain = 0.0
        self.left = self.right = None


def _best_split(x, onehot, indices, counts):
    """Best Gini split of the points in `indices`.

    Returns:
        (score, feature, threshold) where score = sum over children of
        sum_c n_c^2 / n, or None when no threshold separates the points.
        Larger score means lower weighted impurity.
    """
    best = None
    n = len(indices)
    if n < 2:
        return None
    y1 = onehot[indices]
    for f in range(x.shape[1]):
        vals = x[indices, f]
        order = np.argsort(vals, kind="stable")
        sv = vals[order]
        valid = sv[:-1] < sv[1:]
        if not valid.any():
            continue
        left = np.cumsum(y1[order], axis=0)[:-1]
        right = counts - left
        n_left = np.arange(1, n)
        score = (left ** 2).sum(axis=1) / n_left + (right ** 2).sum(axis=1) / (n - n_left)
        score = np.where(valid, score, -np.inf)
        j = int(np.argmax(score))  # first max: lowest threshold
        # strict improvement keeps the lowest feature on ties
        if best is None or score[j] > best[0] + 1e-9:
            best = (float(score[j]), f, float((sv[j] + sv[j + 1]) / 2))
    return best


def fit(sample, max_leaves=40):
    """Grow a tree best-first, always splitting the leaf with the largest
    (sample-weighted) Gini decrease.

    Growth stops when the tree classifies the training sample perfectly, when
    it has `max_leaves` leaves, or when no split decreases impurity.
    """
    if sample is None or sample.m == 0:
        raise ValueError("cannot fit an empty sample")
    if max_leaves < 1:
        raise ValueError(f"max_leaves must be >= 1, got {max_leaves}")
    x, y, m = sample.x, sample.y, sample.m
    onehot = np.eye(sample.n_classes)[y]

    def make(indices):
        g = _Growing(indices, np.bincount(y[indices], minlength=sample.n_classes))
        if np.count_nonzero(g.counts) > 1:
            best = _best_split(x, onehot, indices, g.counts)
            if best is not None:
                score, feature, threshold = best
                parent = float((g.counts.astype(float) ** 2).sum()) / len(indices)
                g.gain = (score - parent) / m
                g.split = (feature, threshold)
        return g

    root = make(np.arange(m))
    frontier = [root]
    n_leaves = 1
    while n_leaves < max_leaves:
        if all(np.count_nonzero(g.counts) <= 1 for g in frontier):
            break
        pick = None
        for g in frontier:  # earliest leaf wins ties
            if g.split is not None and g.gain > 1e-12 and (pick is None or g.gain > pick.gain + 1e-15):
                pick = g
        if pick is None:
            break
        feature, threshold = pick.split
        go_left = x[pick.indices, feature] <= threshold
        pick.left = make(pick.indices[go_left])
        pick.right = make(pick.indices[~go_left])
        frontier.remove(pick)
        frontier += [pick.left, pick.right]
        n_leaves += 1

    def freeze(g):
        if g.left is None:
            return TreeNode(counts=g.counts, indices=g.indices,
                            leaf_label=int(np.argmax(g.counts)))
        return TreeNode(g.split[0], g.split[1], freeze(g.left), freeze(g.right),
                        counts=g.counts, indices=g.indices)

    return DecisionTree(freeze(root), sample.n_features, sample.n_classes)
