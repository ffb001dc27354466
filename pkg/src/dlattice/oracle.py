"""Slow, obviously-correct reference implementations for the test suite.

Concept enumeration here walks every attribute subset and closes it; its
virtue is obviousness, not speed. Guarded to small alphabets.
"""

from __future__ import annotations

from .context import BitVec, FormalContext
from .lattice import Concept, ConceptSet

MAX_ORACLE_ATTRIBUTES = 24


def enumerate_concepts(ctx: FormalContext) -> ConceptSet:
    """All formal concepts of `ctx`, by exhaustive closure of attribute subsets."""
    m = ctx.n_attributes
    if m > MAX_ORACLE_ATTRIBUTES:
        raise ValueError(
            f"alphabet too large for exhaustive enumeration: {m} > {MAX_ORACLE_ATTRIBUTES}"
        )
    out = ConceptSet()
    seen = set()
    for mask in range(1 << m):
        extent = ctx.extent(BitVec(mask, m))
        if extent.mask in seen:
            continue
        seen.add(extent.mask)
        out.add(Concept(extent, ctx.intent(extent)))
    return out


def is_formal_concept(ctx: FormalContext, extent: BitVec, intent: BitVec) -> bool:
    """True iff the pair satisfies the defining condition A' = B and B' = A."""
    if extent.width != ctx.n_objects or intent.width != ctx.n_attributes:
        raise ValueError("extent/intent widths do not match the context")
    return ctx.intent(extent) == intent and ctx.extent(intent) == extent
