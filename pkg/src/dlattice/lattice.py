"""Formal concepts extracted from trained trees and forests.

Every tree-node premise is closed against the full training context into a
concept (extent, intent); concept sets from the trees of a forest are
unioned with deduplication by extent.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .context import BitVec, FormalContext
from .forest import ForestModel
from .tree import DecisionTreeModel


@dataclass(frozen=True)
class Concept:
    """An (extent, intent) pair of one context."""

    extent: BitVec
    intent: BitVec


class ConceptSet:
    """Concepts with pairwise-distinct extents, in first-insertion order."""

    def __init__(self, concepts: Iterable[Concept] = ()):
        self.concepts: list = []
        self._by_extent: dict = {}
        for c in concepts:
            self.add(c)

    def add(self, concept: Concept) -> int:
        """Insert unless an equal-extent concept is present; return its id."""
        existing = self._by_extent.get(concept.extent.mask)
        if existing is not None:
            return existing
        cid = len(self.concepts)
        self.concepts.append(concept)
        self._by_extent[concept.extent.mask] = cid
        return cid

    def __len__(self) -> int:
        return len(self.concepts)

    def __iter__(self) -> Iterator[Concept]:
        return iter(self.concepts)

    def __getitem__(self, cid: int) -> Concept:
        return self.concepts[cid]

    def find_extent(self, extent: BitVec) -> Optional[int]:
        return self._by_extent.get(extent.mask)

    def __contains__(self, concept: Concept) -> bool:
        cid = self._by_extent.get(concept.extent.mask)
        return cid is not None and self.concepts[cid].intent == concept.intent


def close_premise(ctx: FormalContext, premise: BitVec) -> Concept:
    """The concept (premise', premise'') of one rule premise."""
    if premise.width != ctx.n_attributes:
        raise ValueError(
            f"premise width {premise.width} does not match alphabet size {ctx.n_attributes}"
        )
    extent = ctx.extent(premise)
    return Concept(extent, ctx.intent(extent))


def concepts_from_tree(ctx: FormalContext, tree: DecisionTreeModel) -> ConceptSet:
    """Close every node premise of `tree` in the full context, plus the bottom (M', M)."""
    out = ConceptSet()
    for node in tree.nodes:
        out.add(close_premise(ctx, node.premise))
    out.add(close_premise(ctx, BitVec.full(ctx.n_attributes)))
    return out


def concepts_from_forest(ctx: FormalContext, forest: ForestModel) -> ConceptSet:
    """Union of per-tree concepts, deduplicated by extent."""
    out = ConceptSet()
    for tree in forest.trees:
        for concept in concepts_from_tree(ctx, tree):
            out.add(concept)
    return out


def is_subconcept(c1: Concept, c2: Concept) -> bool:
    """Concept order: c1 <= c2 iff c1's extent is contained in c2's."""
    return c1.extent.issubset(c2.extent)
