import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dtpartition import data_io
from dtpartition.learner import DecisionTree, Sample, TreeNode, count_errors, fit, parse_tree, predict


def _stump():
    return parse_tree("(0:1.5 L=1 L=2)", n_features=2, n_classes=3)


def test_single_class_gives_leaf():
    s = Sample(np.arange(10.0).reshape(5, 2), [1] * 5, 2)
    t = fit(s)
    assert t.is_leaf
    assert count_errors(t, s) == 0


def test_two_points_forced_split():
    s = Sample([[0.0, 5.0], [1.0, 5.0]], [0, 1], 2)
    t = fit(s)
    assert t.leaf_count == 2
    assert t.root.feature == 0
    assert t.root.threshold == 0.5
    assert count_errors(t, s) == 0


def test_iris_train_split_reaches_full_accuracy(iris):
    train, _ = data_io.split(iris, 0.75, 0)
    assert train.m == 113  # ceil(0.75 * 150)
    t = fit(train, 40)
    assert t.leaf_count <= 40
    assert count_errors(t, train) == 0


def test_empty_sample_rejected():
    with pytest.raises(ValueError):
        Sample(np.zeros((0, 2)), [], 2)


def test_predict_examples():
    leaf = DecisionTree(TreeNode(leaf_label=2), 2, 3)
    assert predict(leaf, [9.0, -3.0]) == 2
    stump = _stump()
    assert predict(stump, [1.0, 0.0]) == 1
    assert predict(stump, [1.5, 0.0]) == 1
    assert predict(stump, [1.6, 0.0]) == 2


def test_predict_dimension_mismatch():
    with pytest.raises(ValueError):
        predict(_stump(), [1.0])


def test_count_errors_examples():
    x = np.arange(10.0).reshape(10, 1)
    y = [0, 1] * 5
    s = Sample(x, y, 2)
    leaf = DecisionTree(TreeNode(leaf_label=0), 1, 2)
    assert count_errors(leaf, s) == 5
    assert count_errors(fit(s), s) == 0


def test_pruned_to_leaf_iris_errors(iris):
    train, _ = data_io.split(iris, 0.75, 0)
    t = fit(train)
    leaf = t.collapse(())
    plurality = np.bincount(train.y, minlength=3).max()
    assert count_errors(leaf, train) == train.m - plurality


def test_text_round_trip(iris):
    t = fit(iris)
    back = parse_tree(t.to_text(), iris.n_features, iris.n_classes)
    assert back.to_text() == t.to_text()
    assert np.array_equal(back.predict_many(iris.x), t.predict_many(iris.x))


def test_parse_errors():
    for bad in ("(0:1.0 L=0", "(0:1.0 L=0 L=1) L=2", "X", ""):
        with pytest.raises(ValueError):
            parse_tree(bad)


def test_with_sample_rebuilds_histograms(iris):
    t = parse_tree("(2:2.45 L=0 (3:1.75 L=1 L=2))", 4, 3).with_sample(iris)
    assert t.root.counts.tolist() == [50, 50, 50]
    assert t.train_errors() == count_errors(t, iris)
    assert sum(lf.n_points for lf in t.leaves()) == iris.m


def test_growth_stopping_rule(iris):
    for cap in (1, 2, 5, 40):
        t = fit(iris, cap)
        assert t.leaf_count <= cap
        assert count_errors(t, iris) == 0 or t.leaf_count == cap


def test_no_useful_split_stops():
    # identical points with different labels cannot be separated
    s = Sample([[1.0], [1.0], [1.0], [2.0]], [0, 1, 0, 0], 2)
    t = fit(s)
    assert count_errors(t, s) == 1
    assert t.leaf_count < 40


def test_errors_do_not_grow_with_leaves(iris):
    errs = [count_errors(fit(iris, cap), iris) for cap in range(1, 12)]
    assert all(a >= b for a, b in zip(errs, errs[1:]))


def test_fit_is_deterministic(iris):
    assert fit(iris).to_text() == fit(iris).to_text()


def test_split_ties_go_to_lowest_feature():
    # both features separate perfectly
    s = Sample([[0.0, 0.0], [1.0, 1.0]], [0, 1], 2)
    assert fit(s).root.feature == 0


samples = st.integers(2, 25).flatmap(lambda m: st.tuples(
    st.lists(st.lists(st.integers(-20, 20), min_size=2, max_size=2), min_size=m, max_size=m),
    st.lists(st.integers(0, 2), min_size=m, max_size=m)))


@settings(max_examples=60, deadline=None)
@given(samples)
def test_monotone_transform_invariance(data):
    rows, labels = data
    x = np.asarray(rows, dtype=float)
    s = Sample(x, labels, 3)
    warped = Sample(np.column_stack([np.exp(x[:, 0] / 5), x[:, 1] ** 3 + 7]), labels, 3)
    a, b = fit(s), fit(warped)
    assert a.structure == b.structure
    assert np.array_equal(a.predict_many(s.x), b.predict_many(warped.x))


@settings(max_examples=60, deadline=None)
@given(samples)
def test_every_point_reaches_one_leaf(data):
    rows, labels = data
    s = Sample(rows, labels, 3)
    t = fit(s)
    idx = np.concatenate([lf.indices for lf in t.leaves()])
    assert sorted(idx.tolist()) == list(range(s.m))


def test_parse_checks_dimensions():
    with pytest.raises(ValueError):
        parse_tree("(4:1.0 L=0 L=1)", n_features=4)
    with pytest.raises(ValueError):
        parse_tree("(0:1.0 L=0 L=3)", n_features=1, n_classes=3)
