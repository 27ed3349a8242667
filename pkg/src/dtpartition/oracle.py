"""Brute-force ground truth for the partition bounds.

Partitions are encoded as frozensets of bitmasks over point indices (bit j set
means point j is in that part). Two partitions are equal iff their encodings
are equal, which is the canonical form used for deduplication.
"""
from dataclasses import dataclass

import numpy as np

from .learner import Sample

__all__ = [
    "PermutationMatrix",
    "ResourceLimitError",
    "UnsupportedConstruction",
    "worst_case_sample",
    "worst_case_matrix",
    "stump_partitions",
    "tree_partitions",
    "tree_partitions_count",
    "tree_partitions_counts",
    "random_distinct_sample",
    "partition_to_blocks",
]


class ResourceLimitError(ValueError):
    pass


class UnsupportedConstruction(ValueError):
    pass


# Explicit worst-case orderings for 1 <= m <= 7 (one permutation of 1..m per row).
_SMALL_M_ROWS = {
    1: ["1"],
    2: ["12"],
    3: ["123", "132"],
    4: ["1243", "2314", "1324"],
    5: ["12354", "23415", "34125", "13524", "14235"],
    6: ["123654", "234165", "345216", "136542", "352164",
        "514326", "143625", "365124", "125346", "135246"],
    7: ["1234567", "2347156", "3476215", "4762513", "1437625", "5743216",
        "3756124", "2741635", "2637145", "1735246", "3671245", "1476235",
        "1273456", "1572346", "1672345", "2375146", "2574361", "2671345"],
}


@dataclass(frozen=True)
class PermutationMatrix:
    """One ordering of the points 1..m per feature.

    Row i lists the points in ascending order of feature i.
    """

    rows: tuple

    def __post_init__(self):
        if not self.rows:
            raise ValueError("need at least one row")
        m = len(self.rows[0])
        for row in self.rows:
            if sorted(row) != list(range(1, m + 1)):
                raise ValueError(f"row {row} is not a permutation of 1..{m}")

    @property
    def m(self):
        return len(self.rows[0])

    @property
    def n_features(self):
        return len(self.rows)

    def to_sample(self):
        """Point sigma_j of row i gets value j on feature i."""
        x = np.zeros((self.m, self.n_features))
        for i, row in enumerate(self.rows):
            for j, point in enumerate(row, 1):
                x[point - 1, i] = j
        return Sample(x, np.zeros(self.m, dtype=int), n_classes=1)


def _shifted_block_rows(m, n_features):
    l = n_features
    rows = []
    for i in range(l):
        left = [i + j + 1 for j in range(l)]
        middle = list(range(2 * l + 1, m + 1))
        # first row 2l, 2l-1, ..., l+1; each later row adds 1 cyclically in 1..2l
        right = [(2 * l - 1 - j + i) % (2 * l) + 1 for j in range(l)]
        rows.append(tuple(left + middle + right))
    return rows


def worst_case_matrix(m, n_features):
    """Orderings that let a stump realize as many 2-partitions as the bound allows."""
    if m < 1 or n_features < 1:
        raise UnsupportedConstruction(f"m={m}, l={n_features}")
    if m <= 7:
        rows = [tuple(int(ch) for ch in r) for r in _SMALL_M_ROWS[m][:n_features]]
        identity = tuple(range(1, m + 1))
        rows += [identity] * (n_features - len(rows))
    elif 2 * n_features <= m:
        rows = _shifted_block_rows(m, n_features)
    else:
        raise UnsupportedConstruction(
            f"no explicit worst-case sample for m={m}, l={n_features} (need m <= 7 or 2l <= m)")
    return PermutationMatrix(tuple(rows))


def worst_case_sample(m, n_features):
    return worst_case_matrix(m, n_features).to_sample()


def random_distinct_sample(m, n_features, rng):
    """Each feature an independent random ordering of m distinct values."""
    x = np.empty((m, n_features))
    for i in range(n_features):
        x[:, i] = rng.permutation(m) + 1
    return Sample(x, np.zeros(m, dtype=int), n_classes=1)


def _prefix_masks(x):
    """Left masks of every threshold on every feature (value <= threshold goes left).

    Only thresholds strictly between distinct values, plus below-all (empty) and
    above-all (full), are kept.
    """
    m, n_features = x.shape
    full = (1 << m) - 1
    masks = {0, full}
    for i in range(n_features):
        order = np.argsort(x[:, i], kind="stable")
        values = x[order, i]
        mask = 0
        for j in range(m - 1):
            mask |= 1 << int(order[j])
            if values[j] < values[j + 1]:
                masks.add(mask)
    return masks, full


def stump_partitions(sample):
    """Set R(S) of 2-partitions a single decision node realizes on the sample."""
    masks, full = _prefix_masks(np.asarray(sample.x))
    out = set()
    for mask in masks:
        if mask and mask != full:
            out.add(frozenset((mask, full ^ mask)))
    return out


def _leaf_partitions(t, subset, splits, memo):
    """All ways tree class `t` can cut `subset` into its leaves (empty leaves dropped)."""
    if t.is_leaf:
        return {frozenset((subset,))} if subset else {frozenset()}
    key = (t.key, subset)
    hit = memo.get(key)
    if hit is not None:
        return hit
    out = set()
    seen = set()
    for mask in splits:
        left = subset & mask
        if left in seen:
            continue
        seen.add(left)
        right = subset ^ left
        # the sign of the rule lets either side go to either child
        for l_part, r_part in ((left, right), (right, left)):
            for pl in _leaf_partitions(t.left, l_part, splits, memo):
                for pr in _leaf_partitions(t.right, r_part, splits, memo):
                    out.add(pl | pr)
    out = frozenset(out)
    memo[key] = out
    return out


def _coarsenings(blocks, c):
    """Every way of merging the given disjoint blocks into exactly c groups."""
    blocks = list(blocks)
    if c > len(blocks) or c < 1:
        return
    if c == len(blocks):
        yield frozenset(blocks)
        return

    def rec(i, groups):
        if i == len(blocks):
            if len(groups) == c:
                yield frozenset(groups)
            return
        remaining = len(blocks) - i
        if len(groups) + remaining < c:
            return
        b = blocks[i]
        for g in range(len(groups)):
            groups[g] |= b
            yield from rec(i + 1, groups)
            groups[g] ^= b
        if len(groups) < c:
            groups.append(b)
            yield from rec(i + 1, groups)
            groups.pop()

    yield from rec(0, [])


MAX_NODES = 3
MAX_POINTS = 10
MAX_FEATURES = 4


def _check_guard(t, sample):
    m, n_features = np.asarray(sample.x).shape
    if t.node_count > MAX_NODES or m > MAX_POINTS or n_features > MAX_FEATURES:
        raise ResourceLimitError(
            f"brute force limited to {MAX_NODES} nodes, {MAX_POINTS} points, "
            f"{MAX_FEATURES} features; got {t.node_count}, {m}, {n_features}")


def tree_partitions(t, sample, c):
    """Set of distinct c-partitions tree class `t` realizes on the sample."""
    _check_guard(t, sample)
    x = np.asarray(sample.x)
    masks, full = _prefix_masks(x)
    if x.shape[0] == 0:
        return set()
    leafings = _leaf_partitions(t, full, sorted(masks), {})
    out = set()
    for blocks in leafings:
        out.update(_coarsenings(blocks, c))
    return out


def tree_partitions_count(t, sample, c):
    return len(tree_partitions(t, sample, c))


def tree_partitions_counts(t, sample, max_parts):
    """{c: |P^c_T(S)|} for c = 1..max_parts, sharing one enumeration of leafings."""
    _check_guard(t, sample)
    masks, full = _prefix_masks(np.asarray(sample.x))
    leafings = _leaf_partitions(t, full, sorted(masks), {})
    counts = {}
    for c in range(1, max_parts + 1):
        found = set()
        for blocks in leafings:
            found.update(_coarsenings(blocks, c))
        counts[c] = len(found)
    return counts


def partition_to_blocks(partition):
    """Sorted tuple of sorted point-index tuples, for display and comparisons."""
    blocks = []
    for mask in partition:
        blocks.append(tuple(j for j in range(mask.bit_length()) if mask >> j & 1))
    return tuple(sorted(blocks))


def all_set_partitions(m, c):
    """Brute-force enumeration of the c-partitions of {0..m-1} as bitmask sets."""
    singles = [1 << j for j in range(m)]
    return set(_coarsenings(singles, c))
