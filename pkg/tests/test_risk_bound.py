import math

import pytest
from hypothesis import given, settings, strategies as st

from dtpartition.bound_engine import PartitionTable
from dtpartition.risk_bound import BoundConfig, epsilon, prior_pd, prior_qk
from dtpartition.tree_structure import LEAF, STUMP, complete_tree, enumerate_structures, parse_structure

R = 2 ** -13.7
EXACT = BoundConfig(fast=False)


def test_prior_pd_values():
    # frozen from a 50-digit evaluation
    assert prior_pd(LEAF) == pytest.approx(0.6079271018540266, rel=1e-12)
    assert prior_pd(STUMP) == pytest.approx(0.1519817754635067, rel=1e-12)
    for t in enumerate_structures(4):
        assert prior_pd(t) == pytest.approx(0.01899772193293833, rel=1e-12)


def test_prior_pd_shared_within_leaf_count():
    for n in range(1, 9):
        values = {prior_pd(t) for t in enumerate_structures(n)}
        assert len(values) == 1


def test_prior_qk_values():
    assert prior_qk(0, R) == pytest.approx(1 - R)
    assert prior_qk(1, 0.5) == pytest.approx(0.25)
    total = sum(prior_qk(k, R) for k in range(1001))
    assert 1 - 1e-12 <= total <= 1 + 1e-15


def test_config_validation():
    for kw in ({"delta": 0}, {"delta": 1}, {"r": 0}, {"r": 1.5}):
        with pytest.raises(ValueError):
            BoundConfig(**kw)


def test_epsilon_golden():
    # 50-digit evaluation of the formula with growth bound 2 for a leaf
    assert epsilon(100, 0, LEAF, 2, 5, EXACT) == pytest.approx(0.2229179705447836, rel=1e-12)
    assert epsilon(100, 0, LEAF, 2, 5) == pytest.approx(0.2229179705447836, rel=1e-12)


def test_epsilon_increasing_in_k():
    for t in (LEAF, STUMP, parse_structure("((LL)L)")):
        values = [epsilon(100, k, t, 2, 5) for k in range(51)]
        assert all(a < b for a, b in zip(values, values[1:]))


def test_bigger_tree_has_bigger_bound():
    four = parse_structure("((LL)(LL))")
    for k in (0, 5, 20):
        assert epsilon(100, k, four, 2, 5, EXACT) > epsilon(100, k, STUMP, 2, 5, EXACT)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 60), st.integers(1, 6), st.integers(2, 4), st.integers(1, 5),
       st.sampled_from([1, 2, 3, 5]))
def test_fast_epsilon_dominates_exact(m, n_leaves, n_classes, ell, k):
    k = min(k, m)
    for t in enumerate_structures(n_leaves):
        assert epsilon(m, k, t, n_classes, ell) >= epsilon(m, k, t, n_classes, ell, EXACT)


def test_no_overflow_at_scale():
    t = complete_tree(5)  # 32 leaves
    e = epsilon(100_000, 10, t, 3, 4)
    assert math.isfinite(e) and e > 0
    # the exact recursion is quadratic in m, so it gets a smaller sample
    e = epsilon(120, 10, complete_tree(3), 3, 4, EXACT)
    assert math.isfinite(e) and e > 0
    chain = parse_structure("(L" * 39 + "L" + ")" * 39)
    assert chain.leaf_count == 40
    assert math.isfinite(epsilon(100_000, 0, chain, 10, 13))


def test_table_mode_must_match():
    with pytest.raises(ValueError):
        epsilon(10, 0, STUMP, 2, 2, EXACT, PartitionTable(fast=True))


def test_bad_k_rejected():
    with pytest.raises(ValueError):
        epsilon(10, 11, STUMP, 2, 2)
