import numpy as np
import pytest

from dlattice.context import TASK_CLASSIFICATION, TASK_REGRESSION, BitVec
from dlattice.datasets import FRUIT_OBJECTS, fruit_context
from dlattice.tree import (
    MalformedDescriptionError,
    Targets,
    TreeConfig,
    best_split,
    extract_rules,
    fit_tree,
    impurity,
    predict_tree,
)

from .util import random_scaled_context, random_targets


def fit_fruit_tree(exclude_mango=True, **cfg):
    names = [n for n in FRUIT_OBJECTS if not (exclude_mango and n == "mango")]
    ctx, targets = fruit_context(names, dichotomized=True)
    rng = np.random.default_rng(0)
    tree = fit_tree(ctx, BitVec.full(ctx.n_objects), targets, TreeConfig(**cfg), rng)
    return ctx, targets, tree


class TestTargets:
    def test_classification_requires_binary(self):
        with pytest.raises(ValueError, match="0/1"):
            Targets(np.array([0.0, 2.0]), TASK_CLASSIFICATION)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError, match="non-finite"):
            Targets(np.array([0.0, np.nan]), TASK_REGRESSION)

    def test_values_are_read_only(self):
        t = Targets(np.array([1.0, 0.0]), TASK_CLASSIFICATION)
        with pytest.raises(ValueError):
            t.values[0] = 0.0


class TestImpurity:
    def test_pure_node(self):
        assert impurity([1, 1, 1, 1], TASK_CLASSIFICATION) == 0.0

    def test_even_split_gini(self):
        assert impurity([1, 0], TASK_CLASSIFICATION) == pytest.approx(0.5)

    def test_regression_variance(self):
        assert impurity([2.0, 4.0], TASK_REGRESSION) == pytest.approx(1.0)

    def test_weighted_gini(self):
        # weights 2,1 on labels 1,0: p = 2/3, gini = 1 - 4/9 - 1/9 = 4/9
        assert impurity([1, 0], TASK_CLASSIFICATION, weights=[2, 1]) == pytest.approx(4 / 9)

    def test_empty_subset_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            impurity([], TASK_CLASSIFICATION)


class TestBestSplit:
    def test_perfect_split_tie_breaks_to_lowest_index(self):
        ctx, targets = fruit_context(dichotomized=True)
        node = ctx.object_set(["apple", "grapefruit", "toy cube", "egg"])
        firm = ctx.attribute_index("firm")
        yellow = ctx.attribute_index("color_is_yellow")
        got = best_split(ctx, node, [yellow, firm], targets)
        assert got is not None
        literal, gain = got
        assert literal == min(firm, yellow)
        assert gain == pytest.approx(0.5)

    def test_pure_node_has_no_split(self):
        ctx, targets = fruit_context(dichotomized=True)
        node = ctx.object_set(["apple", "grapefruit"])  # both label 1
        assert best_split(ctx, node, list(ctx.split_candidates()), targets) is None

    def test_singleton_node_has_no_split(self):
        ctx, targets = fruit_context(dichotomized=True)
        node = ctx.object_set(["apple"])
        got = best_split(
            ctx, node, list(ctx.split_candidates()), targets, min_samples_leaf=1
        )
        assert got is None

    def test_min_samples_leaf_blocks_unbalanced_split(self):
        ctx, targets = fruit_context(dichotomized=True)
        node = ctx.object_set(["apple", "grapefruit", "kiwi", "egg"])
        # any perfect split isolates egg (1 vs 3); leaf minimum of 2 forbids it
        got = best_split(
            ctx, node, list(ctx.split_candidates()), targets, min_samples_leaf=2
        )
        if got is not None:
            literal, _ = got
            left = node & ctx.column(literal)
            assert len(left) >= 2 and len(node) - len(left) >= 2

    def test_empty_node_rejected(self):
        ctx, targets = fruit_context(dichotomized=True)
        with pytest.raises(ValueError, match="empty"):
            best_split(ctx, BitVec.empty(8), [0], targets)


class TestFitTree:
    def test_root_prediction_is_training_mean(self):
        ctx, targets, tree = fit_fruit_tree(max_depth=3)
        assert tree.nodes[tree.root].prediction == pytest.approx(4 / 7)

    def test_single_object_sample(self):
        ctx, targets = fruit_context(dichotomized=True)
        rng = np.random.default_rng(0)
        sample = ctx.object_set(["egg"])
        tree = fit_tree(ctx, sample, targets, TreeConfig(), rng)
        assert len(tree.nodes) == 1
        assert tree.nodes[0].prediction == 0.0

    def test_constant_targets_give_single_leaf(self):
        ctx, _ = fruit_context(dichotomized=True)
        targets = Targets(np.ones(8), TASK_CLASSIFICATION)
        tree = fit_tree(ctx, BitVec.full(8), targets, TreeConfig(), np.random.default_rng(0))
        assert len(tree.nodes) == 1
        assert tree.nodes[0].prediction == 1.0

    def test_empty_sample_rejected(self):
        ctx, targets = fruit_context(dichotomized=True)
        with pytest.raises(ValueError, match="empty"):
            fit_tree(ctx, BitVec.empty(8), targets, TreeConfig(), np.random.default_rng(0))

    def test_max_depth_zero_gives_root_only(self):
        ctx, targets, tree = fit_fruit_tree(max_depth=0)
        assert len(tree.nodes) == 1

    def test_node_invariants_random(self):
        rng = np.random.default_rng(42)
        for _ in range(60):
            ctx, _, _ = random_scaled_context(rng)
            targets = random_targets(rng, ctx.n_objects)
            tree = fit_tree(ctx, BitVec.full(ctx.n_objects), targets, TreeConfig(), rng)
            object_sets = set()
            for node in tree.nodes:
                assert node.objects.mask not in object_sets  # pairwise distinct
                object_sets.add(node.objects.mask)
                idx = list(node.objects)
                expect = float(np.mean(targets.values[idx]))
                assert abs(node.prediction - expect) < 1e-12
                # objects = extent of premise within the training sample
                assert node.objects == ctx.extent(node.premise)
                if not node.is_leaf:
                    left, right = tree.nodes[node.left], tree.nodes[node.right]
                    assert (left.objects | right.objects) == node.objects
                    assert left.objects.isdisjoint(right.objects)
                    assert left.objects and right.objects
                    assert left.premise == node.premise.with_bit(node.split)
                    assert right.premise == node.premise.with_bit(ctx.negation[node.split])


class TestExtractRules:
    def test_single_leaf(self):
        ctx, _ = fruit_context(dichotomized=True)
        targets = Targets(np.ones(8), TASK_CLASSIFICATION)
        tree = fit_tree(ctx, BitVec.full(8), targets, TreeConfig(), np.random.default_rng(0))
        rules = extract_rules(tree)
        assert len(rules) == 1
        assert rules[0].premise == BitVec.empty(18)
        assert rules[0].prediction == 1.0
        assert rules[0].support == 8

    def test_depth_one_premises(self):
        ctx, targets, tree = fit_fruit_tree(max_depth=1)
        rules = extract_rules(tree)
        premises = {r.premise for r in rules}
        root = tree.nodes[tree.root]
        assert BitVec.empty(18) in premises
        assert root.premise.with_bit(root.split) in premises
        assert root.premise.with_bit(tree.negation[root.split]) in premises

    def test_ancestor_premise_contained_in_descendants(self):
        rng = np.random.default_rng(5)
        for _ in range(40):
            ctx, _, _ = random_scaled_context(rng)
            targets = random_targets(rng, ctx.n_objects)
            tree = fit_tree(ctx, BitVec.full(ctx.n_objects), targets, TreeConfig(), rng)

            def walk(nid, ancestors):
                node = tree.nodes[nid]
                for a in ancestors:
                    assert a < node.premise or a == node.premise
                if not node.is_leaf:
                    walk(node.left, ancestors + [node.premise])
                    walk(node.right, ancestors + [node.premise])

            walk(tree.root, [])


class TestPredictTree:
    def test_depth_one_left_branch(self):
        ctx, targets, tree = fit_fruit_tree(max_depth=1)
        root = tree.nodes[tree.root]
        desc = BitVec.empty(18).with_bit(root.split)
        assert predict_tree(tree, desc) == tree.nodes[root.left].prediction

    def test_root_only_tree(self):
        ctx, _ = fruit_context(dichotomized=True)
        targets = Targets(np.zeros(8), TASK_CLASSIFICATION)
        tree = fit_tree(ctx, BitVec.full(8), targets, TreeConfig(), np.random.default_rng(0))
        assert predict_tree(tree, BitVec.empty(18)) == 0.0

    def test_malformed_description(self):
        ctx, targets, tree = fit_fruit_tree()
        assert not tree.nodes[tree.root].is_leaf
        with pytest.raises(MalformedDescriptionError):
            predict_tree(tree, BitVec.empty(18))

    def test_equals_maximal_covering_rule_on_training_objects(self):
        rng = np.random.default_rng(99)
        for _ in range(60):
            ctx, _, _ = random_scaled_context(rng)
            targets = random_targets(rng, ctx.n_objects)
            tree = fit_tree(ctx, BitVec.full(ctx.n_objects), targets, TreeConfig(), rng)
            rules = extract_rules(tree)
            for g in range(ctx.n_objects):
                desc = ctx.row(g)
                covering = [r for r in rules if r.premise <= desc]
                maximal = [
                    r
                    for r in covering
                    if not any(r.premise < o.premise for o in covering)
                ]
                assert len(maximal) == 1  # the unique leaf on g's path
                assert predict_tree(tree, desc) == maximal[0].prediction
