"""Decision lattices: concept intents as rule premises, predictions by
averaging the maximal rules that cover a description.

A rule covers a description when its premise is a subset of the raw
description (no closure is applied on the query side). Among covering
rules only the premise-maximal ones vote, each with equal weight; when
nothing covers, the global training mean is returned.
"""

from __future__ import annotations

from typing import List, Sequence

import numpy as np

from .context import TASK_CLASSIFICATION, BitVec, FormalContext
from .lattice import ConceptSet
from .tree import ClassificationRule, Targets


class DecisionLattice:
    """An indexed rule set with a fallback prediction."""

    def __init__(self, rules: Sequence[ClassificationRule], fallback: float, task: str):
        premises = {r.premise.mask for r in rules}
        if len(premises) != len(rules):
            raise ValueError("rule premises must be pairwise distinct")
        widths = {r.premise.width for r in rules}
        if len(widths) > 1:
            raise ValueError("rules span different alphabets")
        self.rules = tuple(rules)
        self.fallback = float(fallback)
        self.task = task
        self.n_attributes = widths.pop() if widths else 0
        self._packed = None  # lazy premise matrix for covering queries

    def __len__(self) -> int:
        return len(self.rules)

    def _premise_matrix(self) -> np.ndarray:
        if self._packed is None:
            words = max(1, (self.n_attributes + 63) // 64)
            packed = np.zeros((len(self.rules), words), dtype=np.uint64)
            for i, rule in enumerate(self.rules):
                raw = rule.premise.mask.to_bytes(words * 8, "little")
                packed[i] = np.frombuffer(raw, dtype=np.uint64)
            self._packed = packed
        return self._packed

    def _pack_description(self, description: BitVec) -> np.ndarray:
        if description.width != self.n_attributes:
            raise ValueError(
                f"description width {description.width} does not match "
                f"alphabet size {self.n_attributes}"
            )
        words = max(1, (self.n_attributes + 63) // 64)
        raw = description.mask.to_bytes(words * 8, "little")
        return np.frombuffer(raw, dtype=np.uint64)


def build_rules(
    ctx: FormalContext, targets: Targets, concepts: ConceptSet
) -> DecisionLattice:
    """One rule per nonempty-extent concept: premise = intent, prediction =
    mean target over the extent. The fallback is the global training mean."""
    if len(targets) != ctx.n_objects:
        raise ValueError("targets length does not match the context")
    y = targets.values
    rules = []
    for concept in concepts:
        if concept.extent.width != ctx.n_objects:
            raise ValueError("concept extents do not match the context")
        if not concept.extent:
            continue  # bottom with empty extent has no defined prediction
        idx = np.fromiter(concept.extent, dtype=np.intp, count=len(concept.extent))
        rules.append(
            ClassificationRule(concept.intent, float(y[idx].mean()), len(idx))
        )
    return DecisionLattice(rules, float(y.mean()), targets.task)


def covering_rules(dl: DecisionLattice, description: BitVec) -> List[ClassificationRule]:
    """All rules whose premise is contained in the description."""
    if not dl.rules:
        dl._pack_description(description)  # still validate the width
        return []
    premises = dl._premise_matrix()
    desc = dl._pack_description(description)
    covered = ~np.any(premises & ~desc, axis=1)
    return [dl.rules[i] for i in np.flatnonzero(covered)]


def maximal_rules(rules: Sequence[ClassificationRule]) -> List[ClassificationRule]:
    """Rules whose premise is not a strict subset of another member's premise."""
    ordered = sorted(rules, key=lambda r: len(r.premise), reverse=True)
    kept: List[ClassificationRule] = []
    for rule in ordered:
        if not any(rule.premise < k.premise for k in kept):
            kept.append(rule)
    return kept


def predict_value(dl: DecisionLattice, description: BitVec) -> float:
    """Mean prediction of the maximal covering rules; fallback when none cover."""
    covering = covering_rules(dl, description)
    if not covering:
        return dl.fallback
    maximal = maximal_rules(covering)
    return float(np.mean([r.prediction for r in maximal]))


def predict_label(dl: DecisionLattice, description: BitVec, threshold: float = 0.5) -> int:
    """Thresholded class label; ties predict the positive class."""
    if dl.task != TASK_CLASSIFICATION:
        raise ValueError("predict_label requires a classification lattice")
    return 1 if predict_value(dl, description) >= threshold else 0
