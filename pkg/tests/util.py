"""Shared generators for randomized tests. Everything is seeded."""

from __future__ import annotations

import numpy as np

from dlattice.context import (
    TASK_CLASSIFICATION,
    TASK_REGRESSION,
    FormalContext,
    fit_schema,
    scale_table,
)
from dlattice.tree import Targets


def random_raw_context(rng: np.random.Generator, max_objects=8, max_attrs=9) -> FormalContext:
    """A random plain context (no negation pairing)."""
    n = int(rng.integers(1, max_objects + 1))
    m = int(rng.integers(1, max_attrs + 1))
    incidence = rng.random((n, m)) < rng.uniform(0.2, 0.8)
    return FormalContext(
        [f"g{i}" for i in range(n)], [f"m{j}" for j in range(m)], incidence
    )


def random_scaled_context(rng: np.random.Generator, max_objects=8, max_base=6):
    """A random dichotomized context from random binary source columns."""
    n = int(rng.integers(1, max_objects + 1))
    b = int(rng.integers(1, max_base + 1))
    data = (rng.random((n, b)) < rng.uniform(0.2, 0.8)).astype(float)
    columns = [(f"a{j}", data[:, j]) for j in range(b)]
    schema = fit_schema(columns)
    return scale_table(columns, schema), schema, columns


def random_targets(rng: np.random.Generator, n: int, task=TASK_CLASSIFICATION) -> Targets:
    if task == TASK_CLASSIFICATION:
        values = rng.integers(0, 2, size=n).astype(float)
    else:
        values = rng.normal(size=n)
    return Targets(values, task)


def random_attr_subset(rng: np.random.Generator, ctx: FormalContext):
    from dlattice.context import BitVec

    mask = int(rng.integers(0, 1 << ctx.n_attributes)) if ctx.n_attributes else 0
    return BitVec(mask, ctx.n_attributes)
