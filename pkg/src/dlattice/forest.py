"""Bagged ensembles of decision trees over a formal context.

Each tree trains on a bootstrap draw of the objects; duplicate draws enter
impurity and node predictions as integer multiplicities, matching standard
bagging. Per-node feature subsampling uses a fraction of the positive
literal pool.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .context import TASK_CLASSIFICATION, BitVec, FormalContext
from .tree import DecisionTreeModel, Targets, TreeConfig, fit_tree, predict_tree


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 5
    bootstrap: bool = True
    feature_fraction: Optional[float] = None  # None -> task default
    max_depth: Optional[int] = None
    min_samples_leaf: int = 1

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        if self.feature_fraction is not None and not 0.0 < self.feature_fraction <= 1.0:
            raise ValueError("feature_fraction must be in (0, 1]")


@dataclass(frozen=True)
class ForestModel:
    trees: tuple
    samples: tuple  # distinct-object sets the trees were trained on
    config: ForestConfig


def bootstrap_counts(n_objects: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n_objects indices with replacement; return per-object draw counts."""
    if n_objects < 1:
        raise ValueError("n_objects must be >= 1")
    draws = rng.integers(0, n_objects, size=n_objects)
    return np.bincount(draws, minlength=n_objects)


def bootstrap_sample(n_objects: int, rng: np.random.Generator) -> BitVec:
    """The distinct-object set of one bootstrap draw (never empty)."""
    counts = bootstrap_counts(n_objects, rng)
    return BitVec.from_indices(n_objects, np.flatnonzero(counts))


def resolve_feature_fraction(config: ForestConfig, n_candidates: int, task: str) -> float:
    """Config value, or the usual defaults: sqrt fraction / one third."""
    if config.feature_fraction is not None:
        return config.feature_fraction
    if n_candidates <= 1:
        return 1.0
    if task == TASK_CLASSIFICATION:
        return math.sqrt(n_candidates) / n_candidates
    return 1.0 / 3.0


def fit_forest(
    ctx: FormalContext,
    targets: Targets,
    config: ForestConfig,
    rng: np.random.Generator,
) -> ForestModel:
    """Train `config.n_trees` trees on independent bootstrap samples.

    Each tree gets a child generator spawned up front, so results are
    deterministic under a fixed seed regardless of how the per-tree work
    would be scheduled.
    """
    if ctx.n_objects < 1:
        raise ValueError("cannot fit a forest on an empty context")
    if len(targets) != ctx.n_objects:
        raise ValueError("targets length does not match the context")
    frac = resolve_feature_fraction(config, len(ctx.split_candidates()), targets.task)
    tree_config = TreeConfig(
        max_depth=config.max_depth,
        min_samples_leaf=config.min_samples_leaf,
        feature_fraction=frac,
    )
    child_seeds = rng.integers(0, 2**63 - 1, size=config.n_trees)

    trees = []
    samples = []
    for seed in child_seeds:
        child = np.random.default_rng(int(seed))
        if config.bootstrap:
            counts = bootstrap_counts(ctx.n_objects, child)
            sample = BitVec.from_indices(ctx.n_objects, np.flatnonzero(counts))
            weights = counts.astype(float)
        else:
            sample = BitVec.full(ctx.n_objects)
            weights = None
        trees.append(fit_tree(ctx, sample, targets, tree_config, child, weights))
        samples.append(sample)
    return ForestModel(tuple(trees), tuple(samples), config)


def predict_forest(forest: ForestModel, description: BitVec) -> float:
    """Unweighted mean of the member trees' predictions."""
    return float(
        np.mean([predict_tree(t, description) for t in forest.trees])
    )
