"""Benchmark pipeline: CSV ingestion, cross-validated evaluation of tree,
forest and lattice models, and lattice-construction timing.

Scaling schemas are fitted on the training fold only, so no threshold
information leaks from test rows. The same trained forest backs the
forest model and the lattice model of equal size, which makes their
scores comparable rule-for-rule.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .context import (
    TASK_CLASSIFICATION,
    TASK_REGRESSION,
    BitVec,
    describe_row,
    fit_schema,
    scale_table,
)
from .datasets import load_builtin, synthetic_binary
from .decision import build_rules, predict_value
from .forest import ForestConfig, fit_forest, predict_forest
from .lattice import concepts_from_forest, concepts_from_tree
from .metrics import f1_score, kfold_split, wape
from .tree import Targets, TreeConfig, fit_tree, predict_tree

DEFAULT_NA = ("", "?", "NA", "NaN", "nan")


@dataclass(frozen=True)
class DatasetSpec:
    """Where a dataset comes from and how to read it.

    `source` is a CSV path or "builtin:<name>" (fruit, breast, diabetes).
    Rows containing missing cells (values in `na_values`) are dropped and
    counted. Undeclared CSV columns are typed by inspection: all-0/1 ->
    binary, parseable -> numeric, otherwise categorical (one-hot into
    "column=value" binary columns).
    """

    source: str
    target: Optional[str] = None
    task: Optional[str] = None
    id_column: Optional[str] = None
    column_kinds: Optional[Mapping[str, str]] = None
    max_rows: Optional[int] = None
    na_values: Tuple[str, ...] = DEFAULT_NA


@dataclass
class LoadedDataset:
    object_names: List[str]
    columns: List[Tuple[str, np.ndarray]]
    targets: Optional[Targets]
    n_dropped: int = 0


def load_csv(spec: DatasetSpec) -> LoadedDataset:
    """Read and type a CSV per the spec; see DatasetSpec for the rules."""
    if spec.source.startswith("builtin:"):
        raise ValueError("load_csv expects a file path; use load_dataset for builtins")
    try:
        with open(spec.source, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise ValueError(f"{spec.source}: empty file") from None
            raw_rows = [row for row in reader if row]
    except FileNotFoundError:
        raise ValueError(f"dataset file not found: {spec.source}") from None
    if not raw_rows:
        raise ValueError(f"{spec.source}: no data rows")
    width = len(header)
    for i, row in enumerate(raw_rows):
        if len(row) != width:
            raise ValueError(f"{spec.source}: row {i + 2} has {len(row)} cells, expected {width}")

    na = set(spec.na_values)
    kept, n_dropped = [], 0
    for row in raw_rows:
        if any(cell.strip() in na for cell in row):
            n_dropped += 1
        else:
            kept.append([cell.strip() for cell in row])
    if not kept:
        raise ValueError(f"{spec.source}: all rows contain missing values")
    if spec.max_rows is not None:
        kept = kept[: spec.max_rows]

    by_name: Dict[str, List[str]] = {name: [] for name in header}
    if len(by_name) != len(header):
        raise ValueError(f"{spec.source}: duplicate column names in header")
    for row in kept:
        for name, cell in zip(header, row):
            by_name[name].append(cell)

    if spec.target is not None and spec.target not in by_name:
        raise ValueError(f"{spec.source}: missing target column {spec.target!r}")
    if spec.id_column is not None and spec.id_column not in by_name:
        raise ValueError(f"{spec.source}: missing id column {spec.id_column!r}")

    object_names = (
        list(by_name[spec.id_column])
        if spec.id_column is not None
        else [f"r{i}" for i in range(len(kept))]
    )
    if len(set(object_names)) != len(object_names):
        object_names = [f"{n}#{i}" for i, n in enumerate(object_names)]

    targets = None
    if spec.target is not None:
        if spec.task is None:
            raise ValueError("a target column needs a task")
        targets = Targets(
            _parse_target(by_name[spec.target], spec.task, spec.target), spec.task
        )

    kinds = dict(spec.column_kinds or {})
    columns: List[Tuple[str, np.ndarray]] = []
    for name in header:
        if name == spec.target or name == spec.id_column:
            continue
        columns.extend(_type_column(name, by_name[name], kinds.get(name)))
    return LoadedDataset(object_names, columns, targets, n_dropped)


def _parse_target(cells: List[str], task: str, name: str) -> np.ndarray:
    values, parsed = [], True
    for cell in cells:
        try:
            values.append(float(cell))
        except ValueError:
            parsed = False
            break
    if parsed:
        return np.asarray(values)
    if task == TASK_REGRESSION:
        raise ValueError(f"target column {name!r} has non-numeric values")
    distinct = sorted(set(cells))
    if len(distinct) != 2:
        raise ValueError(
            f"target column {name!r} needs 0/1 or exactly two categories, got {distinct[:5]}"
        )
    mapping = {distinct[0]: 0.0, distinct[1]: 1.0}
    return np.asarray([mapping[c] for c in cells])


def _type_column(name: str, cells: List[str], kind: Optional[str]):
    values, parsed = [], True
    for i, cell in enumerate(cells):
        try:
            values.append(float(cell))
        except ValueError:
            if kind in ("numeric", "binary"):
                raise ValueError(
                    f"column {name!r}, row {i + 2}: cannot parse {cell!r} as a number"
                ) from None
            parsed = False
            break
    if parsed:
        return [(name, np.asarray(values))]
    # categorical: one binary column per observed value
    out = []
    for value in sorted(set(cells)):
        flag = np.asarray([1.0 if c == value else 0.0 for c in cells])
        out.append((f"{name}={value}", flag))
    return out


def load_dataset(spec: DatasetSpec) -> LoadedDataset:
    """Dispatch between builtin datasets and CSV files."""
    if spec.source.startswith("builtin:"):
        name = spec.source.split(":", 1)[1]
        object_names, columns, targets = load_builtin(name)
        if spec.task is not None and targets is not None and spec.task != targets.task:
            raise ValueError(
                f"builtin {name!r} is a {targets.task} dataset, not {spec.task}"
            )
        if spec.max_rows is not None:
            m = spec.max_rows
            object_names = object_names[:m]
            columns = [(n, v[:m]) for n, v in columns]
            targets = Targets(targets.values[:m], targets.task)
        return LoadedDataset(object_names, columns, targets)
    return load_csv(spec)


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelSpec:
    """A benchmark entry: "DT", "DL_DT", "RF_<m>" or "DL_RF_<m>"."""

    name: str
    kind: str  # "tree" | "forest" | "lattice"
    n_trees: int = 1

    @classmethod
    def parse(cls, name: str) -> "ModelSpec":
        if name == "DT":
            return cls(name, "tree")
        if name == "DL_DT":
            return cls(name, "lattice", 0)  # 0 marks "from the single tree"
        for prefix, kind in (("DL_RF_", "lattice"), ("RF_", "forest")):
            if name.startswith(prefix):
                suffix = name[len(prefix) :]
                if suffix.isdigit() and int(suffix) >= 1:
                    return cls(name, kind, int(suffix))
        raise ValueError(f"unknown model name {name!r}")


@dataclass
class ModelReport:
    name: str
    train_scores: List[float] = field(default_factory=list)
    test_scores: List[float] = field(default_factory=list)
    lattice_sizes: List[int] = field(default_factory=list)
    fit_seconds: List[float] = field(default_factory=list)
    lattice_seconds: List[float] = field(default_factory=list)
    predict_seconds: List[float] = field(default_factory=list)

    def to_dict(self, include_timings: bool = True) -> dict:
        out = {
            "name": self.name,
            "train_scores": self.train_scores,
            "test_scores": self.test_scores,
            "train_mean": float(np.mean(self.train_scores)),
            "test_mean": float(np.mean(self.test_scores)),
        }
        if self.lattice_sizes:
            out["lattice_sizes"] = self.lattice_sizes
        if include_timings:
            out["timings"] = {
                "fit_seconds": self.fit_seconds,
                "lattice_seconds": self.lattice_seconds,
                "predict_seconds": self.predict_seconds,
            }
        return out


@dataclass
class BenchReport:
    dataset: str
    task: str
    metric: str
    folds: int
    seed: int
    n_objects: int
    n_dropped: int
    models: List[ModelReport]

    def to_dict(self, include_timings: bool = True) -> dict:
        return {
            "format": "dlattice-bench-report",
            "version": 1,
            "dataset": self.dataset,
            "task": self.task,
            "metric": self.metric,
            "folds": self.folds,
            "seed": self.seed,
            "n_objects": self.n_objects,
            "n_dropped": self.n_dropped,
            "models": [m.to_dict(include_timings) for m in self.models],
        }

    def to_json(self, include_timings: bool = True) -> str:
        return json.dumps(self.to_dict(include_timings), indent=2, sort_keys=True) + "\n"

    def canonical_json(self) -> str:
        """Seed-deterministic content only: wall-clock timings excluded."""
        return self.to_json(include_timings=False)

    def text_table(self) -> str:
        """Fixed-width per-model table of mean train/test metric values."""
        lines = [
            f"dataset: {self.dataset}  task: {self.task}  metric: {self.metric}  "
            f"folds: {self.folds}  seed: {self.seed}",
            f"{'model':<12} {'train':>8} {'test':>8}",
        ]
        for m in self.models:
            lines.append(
                f"{m.name:<12} {np.mean(m.train_scores):>8.4f} {np.mean(m.test_scores):>8.4f}"
            )
        return "\n".join(lines) + "\n"


def _score(task: str, y_true: np.ndarray, values: Sequence[float]) -> float:
    if task == TASK_CLASSIFICATION:
        labels = [1 if v >= 0.5 else 0 for v in values]
        return f1_score(y_true, labels)
    return wape(y_true, list(values))


def run_benchmark(
    spec: DatasetSpec,
    models: Sequence[str] = ("DT", "RF_5", "DL_RF_5", "DL_RF_10"),
    k: int = 5,
    seed: int = 0,
    max_depth: Optional[int] = None,
    min_samples_leaf: int = 1,
    feature_fraction: Optional[float] = None,
    max_thresholds: int = 32,
) -> BenchReport:
    """Cross-validated scores for the requested models on one dataset.

    Forest and lattice models of equal size share the trained forest, so
    "RF_5" and "DL_RF_5" are scored on the same five trees.
    """
    data = load_dataset(spec)
    if data.targets is None:
        raise ValueError("benchmarking needs a target column")
    task = data.targets.task
    parsed = [ModelSpec.parse(name) for name in models]
    n = len(data.object_names)
    folds = kfold_split(n, k, seed)
    reports = {m.name: ModelReport(m.name) for m in parsed}
    y_all = data.targets.values

    for fold_id, (train_set, test_set) in enumerate(folds):
        train_idx = np.fromiter(train_set, dtype=np.intp, count=len(train_set))
        test_idx = np.fromiter(test_set, dtype=np.intp, count=len(test_set))
        train_cols = [(name, values[train_idx]) for name, values in data.columns]
        schema = fit_schema(train_cols, max_thresholds=max_thresholds, kinds=spec.column_kinds)
        ctx = scale_table(
            train_cols, schema, [data.object_names[i] for i in train_idx]
        )
        y_train = Targets(y_all[train_idx], task)
        train_desc = [ctx.row(g) for g in range(ctx.n_objects)]
        test_desc = [
            describe_row(schema, {name: values[i] for name, values in data.columns})
            for i in test_idx
        ]

        single_tree = None
        if any(m.kind == "tree" or (m.kind, m.n_trees) == ("lattice", 0) for m in parsed):
            rng = np.random.default_rng((seed, fold_id, 0))
            t0 = time.perf_counter()
            single_tree = fit_tree(
                ctx,
                BitVec.full(ctx.n_objects),
                y_train,
                TreeConfig(max_depth, min_samples_leaf, 1.0),
                rng,
            )
            tree_fit_s = time.perf_counter() - t0

        forests = {}
        ensemble_sizes = {
            m.n_trees for m in parsed if m.kind in ("forest", "lattice") and m.n_trees >= 1
        }
        for m in sorted(ensemble_sizes):
            rng = np.random.default_rng((seed, fold_id, m))
            cfg = ForestConfig(
                n_trees=m,
                feature_fraction=feature_fraction,
                max_depth=max_depth,
                min_samples_leaf=min_samples_leaf,
            )
            t0 = time.perf_counter()
            forests[m] = (fit_forest(ctx, y_train, cfg, rng), time.perf_counter() - t0)

        for m in parsed:
            rep = reports[m.name]
            lattice_s = 0.0
            if m.kind == "tree":
                model_fit_s = tree_fit_s
                predict_one = lambda d: predict_tree(single_tree, d)
            elif m.kind == "forest":
                forest, model_fit_s = forests[m.n_trees]
                predict_one = lambda d: predict_forest(forest, d)
            else:
                t0 = time.perf_counter()
                if m.n_trees == 0:
                    model_fit_s = tree_fit_s
                    concepts = concepts_from_tree(ctx, single_tree)
                else:
                    forest, model_fit_s = forests[m.n_trees]
                    concepts = concepts_from_forest(ctx, forest)
                lat = build_rules(ctx, y_train, concepts)
                lattice_s = time.perf_counter() - t0
                rep.lattice_sizes.append(len(concepts))
                predict_one = lambda d: predict_value(lat, d)

            t0 = time.perf_counter()
            train_values = [predict_one(d) for d in train_desc]
            test_values = [predict_one(d) for d in test_desc]
            rep.predict_seconds.append(time.perf_counter() - t0)
            rep.fit_seconds.append(model_fit_s)
            rep.lattice_seconds.append(lattice_s)
            rep.train_scores.append(_score(task, y_all[train_idx], train_values))
            rep.test_scores.append(_score(task, y_all[test_idx], test_values))

    return BenchReport(
        dataset=spec.source,
        task=task,
        metric="f1" if task == TASK_CLASSIFICATION else "wape",
        folds=k,
        seed=seed,
        n_objects=n,
        n_dropped=data.n_dropped,
        models=[reports[m.name] for m in parsed],
    )


def lattice_timing(
    sizes: Sequence[int],
    n_trees: int = 5,
    seed: int = 0,
    repeats: int = 3,
    n_base_attributes: int = 16,
) -> List[dict]:
    """Median wall-clock of lattice construction on synthetic contexts.

    Construction here is the trees-to-lattice step (premise closure, union,
    rule building) on an already-trained forest, measured per context size.
    """
    results = []
    for n in sizes:
        names, columns, targets = synthetic_binary(n, n_base_attributes, seed)
        schema = fit_schema(columns)
        ctx = scale_table(columns, schema, names)
        forest = fit_forest(
            ctx, targets, ForestConfig(n_trees=n_trees), np.random.default_rng((seed, n))
        )
        times = []
        size = 0
        for _ in range(repeats):
            t0 = time.perf_counter()
            concepts = concepts_from_forest(ctx, forest)
            build_rules(ctx, targets, concepts)
            times.append(time.perf_counter() - t0)
            size = len(concepts)
        results.append(
            {
                "n_objects": int(n),
                "seconds": float(np.median(times)),
                "lattice_size": size,
                "forest_nodes": sum(len(t.nodes) for t in forest.trees),
            }
        )
    return results
