"""CART-style binary decision trees over a dichotomized formal context.

Splits are searched over the canonical (positive) literal of each
complementary pair; the else-branch contributes the paired negative literal
to the right child's premise, so every node premise is a valid attribute
set of the context. Node predictions are means of the training targets at
the node, which makes a classification prediction the class-1 probability.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .context import TASK_CLASSIFICATION, TASK_REGRESSION, BitVec, FormalContext

# relative slack below which a split gain counts as zero
_GAIN_EPS = 1e-12


class MalformedDescriptionError(ValueError):
    """A description carries neither polarity of a literal the tree splits on."""


@dataclass(frozen=True)
class Targets:
    """Training targets: one real per object of the owning context."""

    values: np.ndarray
    task: str

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=float).copy()
        if arr.ndim != 1:
            raise ValueError("targets must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValueError("targets contain non-finite values")
        if self.task not in (TASK_CLASSIFICATION, TASK_REGRESSION):
            raise ValueError(f"unknown task {self.task!r}")
        if self.task == TASK_CLASSIFICATION and not np.all((arr == 0.0) | (arr == 1.0)):
            raise ValueError("classification targets must be 0/1")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ClassificationRule:
    """Premise attribute-set plus the target predicted for objects under it."""

    premise: BitVec
    prediction: float
    support: int

    def __post_init__(self):
        if not np.isfinite(self.prediction):
            raise ValueError("rule prediction must be finite")
        if self.support < 1:
            raise ValueError("rule support must be >= 1")


@dataclass(frozen=True)
class TreeConfig:
    max_depth: Optional[int] = None
    min_samples_leaf: int = 1
    feature_fraction: float = 1.0

    def __post_init__(self):
        if self.max_depth is not None and self.max_depth < 0:
            raise ValueError("max_depth must be >= 0 or None")
        if self.min_samples_leaf < 1:
            raise ValueError("min_samples_leaf must be >= 1")
        if not 0.0 < self.feature_fraction <= 1.0:
            raise ValueError("feature_fraction must be in (0, 1]")


@dataclass(frozen=True)
class TreeNode:
    premise: BitVec
    objects: BitVec
    prediction: float
    depth: int
    split: Optional[int] = None  # positive literal index, None at leaves
    left: Optional[int] = None
    right: Optional[int] = None

    @property
    def is_leaf(self) -> bool:
        return self.split is None


@dataclass(frozen=True)
class DecisionTreeModel:
    nodes: tuple
    negation: tuple
    root: int = 0

    def leaves(self) -> list:
        return [n for n in self.nodes if n.is_leaf]


def impurity(values: Sequence[float], task: str, weights=None) -> float:
    """Gini impurity for classification, (weighted) population variance for regression."""
    y = np.asarray(values, dtype=float)
    if y.size == 0:
        raise ValueError("impurity of an empty target subset is undefined")
    w = np.ones_like(y) if weights is None else np.asarray(weights, dtype=float)
    total = w.sum()
    if total <= 0:
        raise ValueError("impurity needs positive total weight")
    mean = float(np.dot(w, y) / total)
    if task == TASK_CLASSIFICATION:
        return 1.0 - mean * mean - (1.0 - mean) * (1.0 - mean)
    if task == TASK_REGRESSION:
        return float(np.dot(w, (y - mean) ** 2) / total)
    raise ValueError(f"unknown task {task!r}")


def best_split(
    ctx: FormalContext,
    objects: BitVec,
    candidates: Sequence[int],
    targets: Targets,
    weights=None,
    min_samples_leaf: int = 1,
) -> Optional[Tuple[int, float]]:
    """Candidate literal with the largest weighted impurity decrease.

    Candidates must be positive literals (ones with a declared complement);
    ties break toward the lowest attribute index. Returns None when no split
    has positive gain or a child would fall below `min_samples_leaf`.
    """
    if objects.width != ctx.n_objects:
        raise ValueError("object set width does not match the context")
    if not objects:
        raise ValueError("cannot split an empty node")
    idx = np.fromiter(objects, dtype=np.intp, count=len(objects))
    y = targets.values[idx]
    w = (
        np.ones(len(idx), dtype=float)
        if weights is None
        else np.asarray(weights, dtype=float)[idx]
    )
    cand = np.asarray(sorted(candidates), dtype=np.intp)
    if cand.size == 0:
        return None

    membership = ctx.incidence[np.ix_(idx, cand)]  # n_node x n_candidates
    w_total = w.sum()
    wy_total = float(np.dot(w, y))
    w_left = w @ membership
    wy_left = (w * y) @ membership
    w_right = w_total - w_left
    wy_right = wy_total - wy_left

    # empty-side entries are masked out below; 1.0 keeps the arithmetic finite
    denom_left = np.where(w_left > 0, w_left, 1.0)
    denom_right = np.where(w_right > 0, w_right, 1.0)
    if targets.task == TASK_CLASSIFICATION:
        p_left = wy_left / denom_left
        p_right = wy_right / denom_right
        child = w_left * 2.0 * p_left * (1.0 - p_left) + w_right * 2.0 * p_right * (
            1.0 - p_right
        )
    else:
        wy2_total = float(np.dot(w * y, y))
        wy2_left = (w * y * y) @ membership
        wy2_right = wy2_total - wy2_left
        var_left = wy2_left / denom_left - (wy_left / denom_left) ** 2
        var_right = wy2_right / denom_right - (wy_right / denom_right) ** 2
        child = w_left * np.maximum(var_left, 0.0) + w_right * np.maximum(var_right, 0.0)

    parent = impurity(y, targets.task, w)
    gains = parent - child / w_total
    feasible = (w_left >= min_samples_leaf) & (w_right >= min_samples_leaf)
    gains = np.where(feasible, gains, -np.inf)
    k = int(np.argmax(gains))  # first max -> lowest attribute index
    gain = float(gains[k])
    if not np.isfinite(gain) or gain <= _GAIN_EPS * max(1.0, parent):
        return None
    return int(cand[k]), gain


def fit_tree(
    ctx: FormalContext,
    sample: BitVec,
    targets: Targets,
    config: TreeConfig,
    rng: np.random.Generator,
    weights=None,
) -> DecisionTreeModel:
    """Grow a greedy CART tree on the objects of `sample`.

    `weights`, when given, is a per-object multiplicity array over the full
    context (bootstrap draw counts); impurity, predictions and leaf-size
    limits all use the weighted counts.
    """
    if sample.width != ctx.n_objects:
        raise ValueError("sample width does not match the context")
    if not sample:
        raise ValueError("cannot fit a tree on an empty sample")
    if len(targets) != ctx.n_objects:
        raise ValueError("targets length does not match the context")
    w = np.ones(ctx.n_objects) if weights is None else np.asarray(weights, dtype=float)
    pool = ctx.split_candidates()

    nodes: list = []
    # stack of (node_id, object indices); children appended after parents
    root_idx = np.fromiter(sample, dtype=np.intp, count=len(sample))
    nodes.append(None)
    stack = [(0, BitVec.empty(ctx.n_attributes), root_idx, 0)]
    while stack:
        node_id, premise, idx, depth = stack.pop()
        y = targets.values[idx]
        wn = w[idx]
        prediction = float(np.dot(wn, y) / wn.sum())
        objects = BitVec.from_indices(ctx.n_objects, idx)

        split = None
        if (
            (config.max_depth is None or depth < config.max_depth)
            and wn.sum() >= 2 * config.min_samples_leaf
            and not np.all(y == y[0])
            and pool
        ):
            k = min(len(pool), max(1, int(np.ceil(config.feature_fraction * len(pool)))))
            cand = pool if k == len(pool) else rng.choice(len(pool), size=k, replace=False)
            cand = [pool[i] for i in np.sort(cand)] if k != len(pool) else list(pool)
            split = best_split(
                ctx, objects, cand, targets, w, config.min_samples_leaf
            )

        if split is None:
            nodes[node_id] = TreeNode(premise, objects, prediction, depth)
            continue

        lit, _gain = split
        neg = ctx.negation[lit]
        hit = ctx.incidence[idx, lit]
        left_idx, right_idx = idx[hit], idx[~hit]
        left_id, right_id = len(nodes), len(nodes) + 1
        nodes.extend([None, None])
        nodes[node_id] = TreeNode(
            premise, objects, prediction, depth, lit, left_id, right_id
        )
        stack.append((right_id, premise.with_bit(neg), right_idx, depth + 1))
        stack.append((left_id, premise.with_bit(lit), left_idx, depth + 1))

    return DecisionTreeModel(tuple(nodes), ctx.negation)


def extract_rules(tree: DecisionTreeModel) -> list:
    """One classification rule per node; premise inclusion mirrors ancestry."""
    return [
        ClassificationRule(n.premise, n.prediction, len(n.objects)) for n in tree.nodes
    ]


def predict_tree(tree: DecisionTreeModel, description: BitVec) -> float:
    """Root-to-leaf traversal; equals the maximal covering rule's prediction."""
    node = tree.nodes[tree.root]
    if description.width != node.premise.width:
        raise ValueError("description width does not match the tree's alphabet")
    while not node.is_leaf:
        if node.split in description:
            node = tree.nodes[node.left]
        elif tree.negation[node.split] in description:
            node = tree.nodes[node.right]
        else:
            raise MalformedDescriptionError(
                f"description carries neither literal {node.split} nor its complement"
            )
    return node.prediction
