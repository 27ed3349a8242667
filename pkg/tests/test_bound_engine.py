import logging
import math
from functools import lru_cache
from math import comb, factorial

import pytest

from dtpartition import bound_engine
from dtpartition.bound_engine import (PartitionTable, growth_bound, partition_bound,
                                      partition_bound_fast, stump_pi2_bound, stump_vcdim_exact,
                                      vcdim_upper_bound)
from dtpartition.combinatorics import stirling2
from dtpartition.oracle import tree_partitions_count
from dtpartition.learner import Sample
from dtpartition.tree_structure import (LEAF, STUMP, TreeStructure, complete_tree,
                                        enumerate_structures, node, parse_structure)

CHAIN2 = parse_structure("((LL)L)")
BALANCED = parse_structure("((LL)(LL))")
SMALL = [t for n in range(2, 5) for t in enumerate_structures(n)]  # <= 3 internal nodes


def oriented(t):
    """Both orientations at the root (and the mirrored children) of t."""
    if t.is_leaf:
        return [t]
    return [node(t.left, t.right), node(t.right, t.left),
            node(mirror(t.left), t.right), node(t.right, mirror(t.left))]


def mirror(t):
    return t if t.is_leaf else node(mirror(t.right), mirror(t.left))


@lru_cache(maxsize=None)
def reference(key, c, m, ell):
    """Direct, unmemoized-by-class evaluation of the recursive bound on an
    oriented shape; used as an independent check of the engine."""
    t = parse_structure(key)
    L = t.leaf_count
    if c > m or c > L:
        return 0
    if c == m or c == 1 or m == 1:
        return 1
    if m <= L:
        return stirling2(m, c)
    tl, tr = t.left, t.right
    total = 0
    for k in range(tl.leaf_count, m - tr.leaf_count + 1):
        inner = 0
        for a in range(1, c + 1):
            for b in range(1, c + 1):
                if a + b < c:
                    continue
                inner += (comb(a, c - b) * comb(b, c - a) * factorial(a + b - c)
                          * reference(tl.key, a, k, ell) * reference(tr.key, b, m - k, ell))
        total += min(2 * ell, comb(m, k)) * inner
    if tl.canonical_key == tr.canonical_key:
        total //= 2
    return min(total, stirling2(m, c))


@pytest.mark.parametrize("m, ell, expected", [(6, 10, 31), (6, 1, 5), (1, 5, 0), (0, 3, 0)])
def test_stump_pi2_bound(m, ell, expected):
    assert stump_pi2_bound(m, ell) == expected


def test_stump_pi2_bound_regimes():
    for m in range(2, 30):
        # trivial-bound regime
        for ell in range(1, m // 2 + 1):
            assert stump_pi2_bound(m, ell) == ell * (m - 1)
        # saturated regime
        big = (comb(m, m // 2) + 1) // 2
        assert stump_pi2_bound(m, big) == 2 ** (m - 1) - 1


def test_stump_pi2_rejects_zero_features():
    with pytest.raises(ValueError):
        stump_pi2_bound(5, 0)


@pytest.mark.parametrize("ell, expected", [(10, 6), (1, 2), (3, 4)])
def test_stump_vcdim_exact(ell, expected):
    assert stump_vcdim_exact(ell) == expected


def test_stump_vcdim_exact_by_scan():
    for ell in range(1, 3000):
        d = 1
        while comb(d + 1, (d + 1) // 2) <= 2 * ell:
            d += 1
        assert stump_vcdim_exact(ell) == d


def test_stump_vcdim_agrees_with_algorithm():
    for ell in range(1, 40):
        assert vcdim_upper_bound(STUMP, ell, PartitionTable()) == stump_vcdim_exact(ell)


def test_partition_bound_examples():
    table = PartitionTable()
    assert partition_bound(STUMP, 2, 6, 10, table) == 31
    for t in [LEAF, STUMP, CHAIN2, BALANCED]:
        assert partition_bound(t, 5, 4, 3, table) == 0
    assert partition_bound(BALANCED, 3, 4, 10, table) == 6


def test_partition_bound_base_cases():
    table = PartitionTable()
    assert partition_bound(CHAIN2, 4, 9, 2, table) == 0  # c > L
    assert partition_bound(CHAIN2, 3, 3, 2, table) == 1  # c = m
    assert partition_bound(CHAIN2, 1, 9, 2, table) == 1
    assert partition_bound(CHAIN2, 2, 3, 2, table) == stirling2(3, 2)


def test_partition_bound_matches_reference_in_every_orientation():
    table = PartitionTable()
    for t in SMALL:
        for u in oriented(t):
            for m in range(1, 13):
                for c in range(1, t.leaf_count + 1):
                    for ell in (1, 2, 5):
                        expected = reference(u.key, c, m, ell)
                        assert partition_bound(u, c, m, ell, table) == expected
                        # orientation invariance of the recursion itself
                        assert expected == reference(t.key, c, m, ell)


def test_partition_bound_is_clamped_and_monotone():
    table = PartitionTable()
    for t in SMALL + enumerate_structures(5):
        for ell in (1, 3, 10):
            prev = 0
            for m in range(1, 16):
                value = partition_bound(t, 2, m, ell, table)
                assert value <= stirling2(m, 2)
                assert value >= prev
                prev = value
                for c in range(1, t.leaf_count + 1):
                    assert partition_bound(t, c, m, ell, table) <= stirling2(m, c)


def test_fast_examples():
    table = PartitionTable(fast=True)
    assert partition_bound_fast(STUMP, 2, 6, 10, table) == 31
    assert partition_bound_fast(LEAF, 1, 5, 3, table) == 1
    assert partition_bound_fast(CHAIN2, 2, 5, 10, table) >= partition_bound(CHAIN2, 2, 5, 10)


def test_fast_dominates_exact():
    exact, fast = PartitionTable(), PartitionTable(fast=True)
    for t in SMALL:
        for m in range(1, 13):
            for ell in (1, 2, 5, 10):
                for c in range(1, t.leaf_count + 1):
                    e = partition_bound(t, c, m, ell, exact)
                    f = partition_bound_fast(t, c, m, ell, fast)
                    assert f >= e


def test_table_mode_mismatch():
    with pytest.raises(ValueError):
        partition_bound(STUMP, 2, 5, 1, PartitionTable(fast=True))
    with pytest.raises(ValueError):
        partition_bound_fast(STUMP, 2, 5, 1, PartitionTable())


def test_mirrored_shapes_share_table_entries():
    table = PartitionTable()
    partition_bound(parse_structure("((LL)L)"), 2, 8, 3, table)
    size = len(table)
    partition_bound(parse_structure("(L(LL))"), 2, 8, 3, table)
    assert len(table) == size


def test_growth_bound_examples():
    table = PartitionTable()
    assert growth_bound(LEAF, 7, 3, 5, table) == 3
    assert growth_bound(STUMP, 6, 2, 10, table) == 64
    assert growth_bound(STUMP, 2, 2, 1, table) == 4
    two_points = Sample([[0.0], [1.0]], [0, 0], 1)
    assert tree_partitions_count(STUMP, two_points, 2) == 1


def test_growth_bound_drops_terms_beyond_class_count():
    table = PartitionTable()
    t = complete_tree(2)
    expected = sum(math.perm(3, a) * partition_bound(t, a, 20, 4, table) for a in (1, 2, 3))
    assert growth_bound(t, 20, 3, 4, table) == expected


def test_growth_bound_preconditions():
    with pytest.raises(ValueError):
        growth_bound(STUMP, 0, 2, 1)
    with pytest.raises(ValueError):
        growth_bound(STUMP, 3, 1, 1)


@pytest.mark.parametrize("t, expected", [(LEAF, 1), (STUMP, 6), (CHAIN2, 16)])
def test_vcdim_examples(t, expected):
    assert vcdim_upper_bound(t, 10, PartitionTable()) == expected


def test_vcdim_grows_like_n_log_n_ell():
    table = PartitionTable()
    for height in (1, 2, 3):
        t = complete_tree(height)
        n = t.node_count
        ratio = vcdim_upper_bound(t, 10, table) / (n * math.log2(n * 10) + 1)
        assert ratio <= 6


def test_vcdim_iteration_cap(monkeypatch):
    table = PartitionTable()
    monkeypatch.setattr(table, "bound", lambda *args: 10 ** 10000)
    with pytest.raises(RuntimeError):
        vcdim_upper_bound(STUMP, 1, table)


def test_odd_halving_rounds_up(caplog):
    with caplog.at_level(logging.WARNING):
        assert bound_engine._halve(7, STUMP, 2, 3) == 4
    assert "odd" in caplog.text
    assert bound_engine._halve(8, STUMP, 2, 3) == 4


def test_table_save_load_roundtrip(tmp_path):
    table = PartitionTable()
    vcdim_upper_bound(CHAIN2, 10, table)
    path = tmp_path / "cache.txt"
    table.save(path)
    with open(path, "a") as f:
        f.write("garbage line\n(LL),2,x,1,5\n")
    fresh = PartitionTable()
    assert fresh.load(path) == len(table)
    assert fresh._values == table._values
    assert vcdim_upper_bound(CHAIN2, 10, fresh) == 16


def test_table_load_refuses_other_mode(tmp_path):
    table = PartitionTable(fast=True)
    partition_bound_fast(CHAIN2, 2, 9, 3, table)
    path = tmp_path / "fast.txt"
    table.save(path)
    assert PartitionTable().load(path) == 0
