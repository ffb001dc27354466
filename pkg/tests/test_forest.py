import numpy as np
import pytest

from dlattice.context import TASK_CLASSIFICATION, BitVec, fit_schema, scale_table
from dlattice.datasets import fruit_context, synthetic_binary
from dlattice.forest import (
    ForestConfig,
    bootstrap_counts,
    bootstrap_sample,
    fit_forest,
    predict_forest,
    resolve_feature_fraction,
)
from dlattice.tree import Targets, TreeConfig, fit_tree, predict_tree

from .util import random_scaled_context, random_targets


class TestBootstrap:
    def test_single_object_draw(self):
        assert bootstrap_sample(1, np.random.default_rng(0)) == BitVec.from_indices(1, [0])

    def test_deterministic_under_seed(self):
        a = bootstrap_sample(7, np.random.default_rng(123))
        b = bootstrap_sample(7, np.random.default_rng(123))
        assert a == b

    def test_distinct_fraction_near_632(self):
        # E[distinct]/n -> 1 - 1/e for draws with replacement
        rng = np.random.default_rng(0)
        n = 10_000
        fractions = [len(bootstrap_sample(n, rng)) / n for _ in range(1000)]
        assert np.mean(fractions) == pytest.approx(1 - np.exp(-1), abs=0.01)

    def test_counts_sum_to_n(self):
        counts = bootstrap_counts(50, np.random.default_rng(1))
        assert counts.sum() == 50
        assert counts.min() >= 0


class TestFitForest:
    def test_degenerate_forest_equals_single_tree(self):
        ctx, targets = fruit_context(dichotomized=True)
        config = ForestConfig(n_trees=1, bootstrap=False, feature_fraction=1.0)
        forest = fit_forest(ctx, targets, config, np.random.default_rng(0))
        solo = fit_tree(
            ctx, BitVec.full(8), targets, TreeConfig(feature_fraction=1.0),
            np.random.default_rng(99),
        )
        assert forest.trees[0] == solo
        assert forest.samples[0] == BitVec.full(8)

    def test_five_trees_satisfy_tree_invariants(self):
        ctx, targets = fruit_context(dichotomized=True)
        forest = fit_forest(ctx, targets, ForestConfig(n_trees=5), np.random.default_rng(3))
        assert len(forest.trees) == 5
        for tree, sample in zip(forest.trees, forest.samples):
            assert sample
            for node in tree.nodes:
                assert node.objects.issubset(sample)
                assert node.objects
                idx = list(node.objects)
                assert np.isfinite(node.prediction)
                if not node.is_leaf:
                    left, right = tree.nodes[node.left], tree.nodes[node.right]
                    assert (left.objects | right.objects) == node.objects

    def test_same_seed_identical_forests(self):
        ctx, targets = fruit_context(dichotomized=True)
        cfg = ForestConfig(n_trees=4)
        f1 = fit_forest(ctx, targets, cfg, np.random.default_rng(7))
        f2 = fit_forest(ctx, targets, cfg, np.random.default_rng(7))
        assert f1 == f2

    def test_invalid_config(self):
        with pytest.raises(ValueError):
            ForestConfig(n_trees=0)
        with pytest.raises(ValueError):
            ForestConfig(feature_fraction=0.0)

    def test_feature_fraction_defaults(self):
        assert resolve_feature_fraction(ForestConfig(), 16, TASK_CLASSIFICATION) == pytest.approx(0.25)
        assert resolve_feature_fraction(ForestConfig(), 16, "regression") == pytest.approx(1 / 3)
        assert resolve_feature_fraction(ForestConfig(feature_fraction=0.5), 16, "regression") == 0.5

    def test_predict_forest_is_mean_of_trees(self):
        rng = np.random.default_rng(17)
        ctx, _, _ = random_scaled_context(rng, max_objects=8)
        targets = random_targets(rng, ctx.n_objects)
        forest = fit_forest(ctx, targets, ForestConfig(n_trees=3), rng)
        for g in range(ctx.n_objects):
            desc = ctx.row(g)
            expect = np.mean([predict_tree(t, desc) for t in forest.trees])
            assert predict_forest(forest, desc) == pytest.approx(expect)


def total_nodes(forest):
    return sum(len(t.nodes) for t in forest.trees)


def test_forest_size_grows_subquadratically():
    sizes = [100, 200, 400]
    counts = []
    for n in sizes:
        _, columns, targets = synthetic_binary(n, n_base_attributes=12, seed=5)
        schema = fit_schema(columns)
        ctx = scale_table(columns, schema)
        forest = fit_forest(ctx, targets, ForestConfig(n_trees=5), np.random.default_rng(5))
        counts.append(total_nodes(forest))
    assert counts[0] <= counts[1] <= counts[2]
    # doubling the objects should far less than quadruple the node count
    assert counts[2] / counts[1] < 3.0
    assert counts[1] / counts[0] < 3.0
