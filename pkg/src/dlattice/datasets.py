"""Bundled fixtures, builtin dataset loaders, and synthetic generators.

The fruit table is a tiny 8-object binary dataset used across tests and
docs. Larger benchmark datasets load through scikit-learn's offline
bundles ("breast", "diabetes"); anything else comes from user-supplied
CSV files.
"""

from __future__ import annotations

from importlib import resources
from typing import Optional, Sequence, Tuple

import numpy as np

from .context import (
    TASK_CLASSIFICATION,
    TASK_REGRESSION,
    FormalContext,
    build_context,
    fit_schema,
    scale_table,
)
from .tree import Targets

FRUIT_OBJECTS = (
    "apple",
    "grapefruit",
    "kiwi",
    "plum",
    "toy cube",
    "egg",
    "tennis ball",
    "mango",
)

FRUIT_ATTRIBUTES = (
    "firm",
    "smooth",
    "color_is_yellow",
    "color_is_green",
    "color_is_blue",
    "color_is_white",
    "form_is_round",
    "form_is_oval",
    "form_is_cubic",
)

FRUIT_INCIDENCE = (
    (0, 1, 1, 0, 0, 0, 1, 0, 0),  # apple
    (0, 0, 1, 0, 0, 0, 1, 0, 0),  # grapefruit
    (0, 0, 0, 1, 0, 0, 0, 1, 0),  # kiwi
    (0, 1, 0, 0, 1, 0, 0, 1, 0),  # plum
    (1, 1, 0, 1, 0, 0, 0, 0, 1),  # toy cube
    (1, 1, 0, 0, 0, 1, 0, 1, 0),  # egg
    (0, 0, 0, 0, 0, 1, 1, 0, 0),  # tennis ball
    (0, 1, 0, 1, 0, 0, 0, 1, 0),  # mango
)

FRUIT_LABELS = (1, 1, 1, 1, 0, 0, 0, 1)


def fruit_context(
    objects: Optional[Sequence[str]] = None, dichotomized: bool = False
) -> Tuple[FormalContext, Targets]:
    """The fruit context restricted to `objects` (default: all eight).

    With `dichotomized=True` the context is scaled to the 18-literal
    alphabet carrying both polarities, which is what tree training needs;
    otherwise it keeps the 9 positive attributes only.
    """
    names = tuple(objects) if objects is not None else FRUIT_OBJECTS
    rows = []
    labels = []
    for name in names:
        g = FRUIT_OBJECTS.index(name)
        rows.append(FRUIT_INCIDENCE[g])
        labels.append(FRUIT_LABELS[g])
    targets = Targets(np.array(labels, dtype=float), TASK_CLASSIFICATION)
    if not dichotomized:
        return build_context(names, FRUIT_ATTRIBUTES, rows), targets
    columns = [
        (attr, np.array([r[j] for r in rows], dtype=float))
        for j, attr in enumerate(FRUIT_ATTRIBUTES)
    ]
    schema = fit_schema(columns)
    return scale_table(columns, schema, names), targets


def fruit_csv_path() -> str:
    """Path of the bundled fruit CSV (object ids, 9 binary columns, label)."""
    return str(resources.files("dlattice").joinpath("data/fruit.csv"))


def load_builtin(name: str):
    """Load a bundled/offline dataset as (object_names, columns, targets).

    Supported: "fruit", "breast" (binary classification), "diabetes"
    (regression). Columns come back as a list of (name, float array) pairs.
    """
    if name == "fruit":
        columns = [
            (attr, np.array([row[j] for row in FRUIT_INCIDENCE], dtype=float))
            for j, attr in enumerate(FRUIT_ATTRIBUTES)
        ]
        targets = Targets(np.array(FRUIT_LABELS, dtype=float), TASK_CLASSIFICATION)
        return list(FRUIT_OBJECTS), columns, targets
    if name == "breast":
        from sklearn.datasets import load_breast_cancer

        bunch = load_breast_cancer()
        task = TASK_CLASSIFICATION
    elif name == "diabetes":
        from sklearn.datasets import load_diabetes

        bunch = load_diabetes()
        task = TASK_REGRESSION
    else:
        raise ValueError(f"unknown builtin dataset {name!r}")
    columns = [
        (str(col), bunch.data[:, j].astype(float))
        for j, col in enumerate(bunch.feature_names)
    ]
    names = [f"r{i}" for i in range(bunch.data.shape[0])]
    return names, columns, Targets(bunch.target.astype(float), task)


def synthetic_binary(
    n_objects: int,
    n_base_attributes: int = 16,
    seed: int = 0,
    flip: float = 0.05,
):
    """Random binary columns with a planted conjunctive/disjunctive label rule.

    The label is (a0 and a1) or a2, with a `flip` fraction of labels
    inverted, so trees have structure to find at every size.
    """
    if n_objects < 1 or n_base_attributes < 3:
        raise ValueError("need n_objects >= 1 and n_base_attributes >= 3")
    rng = np.random.default_rng(seed)
    data = rng.integers(0, 2, size=(n_objects, n_base_attributes)).astype(float)
    labels = ((data[:, 0] * data[:, 1]) + data[:, 2] > 0).astype(float)
    noise = rng.random(n_objects) < flip
    labels = np.where(noise, 1.0 - labels, labels)
    columns = [(f"a{j}", data[:, j]) for j in range(n_base_attributes)]
    targets = Targets(labels, TASK_CLASSIFICATION)
    return [f"r{i}" for i in range(n_objects)], columns, targets
