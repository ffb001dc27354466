"""Command-line interface: bench, train, predict, export-lattice, timing."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from typing import List, Optional

import numpy as np

from .bench import BenchReport, DatasetSpec, ModelSpec, lattice_timing, load_dataset, run_benchmark
from .context import TASK_CLASSIFICATION, BitVec, describe_row, fit_schema, scale_table
from .decision import predict_value
from .forest import ForestConfig, fit_forest
from .io import (
    export_lattice_dot,
    export_lattice_json,
    load_model,
    save_model,
)
from .lattice import concepts_from_forest, concepts_from_tree
from .tree import TreeConfig, fit_tree


def _add_data_args(p: argparse.ArgumentParser, need_task: bool = True) -> None:
    p.add_argument("--data", required=True, help="CSV path or builtin:<fruit|breast|diabetes>")
    p.add_argument("--target", help="target column name (CSV only)")
    if need_task:
        p.add_argument(
            "--task", choices=["classification", "regression"], help="prediction task"
        )
    p.add_argument("--id-column", help="column holding object names")
    p.add_argument("--max-rows", type=int, help="cap the number of rows after load")


def _add_model_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--min-samples-leaf", type=int, default=1)
    p.add_argument("--feature-fraction", type=float, default=None)
    p.add_argument("--max-thresholds", type=int, default=32)


def _spec_from_args(args) -> DatasetSpec:
    return DatasetSpec(
        source=args.data,
        target=args.target,
        task=getattr(args, "task", None),
        id_column=args.id_column,
        max_rows=args.max_rows,
    )


def _train_lattice(args):
    """Fit the requested lattice model on the full dataset."""
    spec = _spec_from_args(args)
    data = load_dataset(spec)
    if data.targets is None:
        raise SystemExit("training needs a target column (builtin datasets carry one)")
    model = ModelSpec.parse(args.model)
    if model.kind != "lattice":
        raise SystemExit(f"only lattice models can be trained and saved, got {args.model}")
    schema = fit_schema(data.columns, max_thresholds=args.max_thresholds)
    ctx = scale_table(data.columns, schema, data.object_names)
    rng = np.random.default_rng(args.seed)
    if model.n_trees == 0:
        tree = fit_tree(
            ctx,
            BitVec.full(ctx.n_objects),
            data.targets,
            TreeConfig(args.max_depth, args.min_samples_leaf, 1.0),
            rng,
        )
        concepts = concepts_from_tree(ctx, tree)
    else:
        forest = fit_forest(
            ctx,
            data.targets,
            ForestConfig(
                n_trees=model.n_trees,
                feature_fraction=args.feature_fraction,
                max_depth=args.max_depth,
                min_samples_leaf=args.min_samples_leaf,
            ),
            rng,
        )
        concepts = concepts_from_forest(ctx, forest)
    from .decision import build_rules

    return build_rules(ctx, data.targets, concepts), concepts, schema, ctx


def cmd_bench(args) -> int:
    report = run_benchmark(
        _spec_from_args(args),
        models=args.models.split(","),
        k=args.folds,
        seed=args.seed,
        max_depth=args.max_depth,
        min_samples_leaf=args.min_samples_leaf,
        feature_fraction=args.feature_fraction,
        max_thresholds=args.max_thresholds,
    )
    sys.stdout.write(report.text_table())
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report.to_json(include_timings=not args.no_timings))
        print(f"report written to {args.out}")
    return 0


def cmd_train(args) -> int:
    dl, concepts, schema, ctx = _train_lattice(args)
    save_model(args.out, dl, schema, list(ctx.attribute_names))
    print(f"{args.model}: {len(dl.rules)} rules over {ctx.n_attributes} literals -> {args.out}")
    return 0


def cmd_predict(args) -> int:
    dl, schema, attributes = load_model(args.model)
    spec = DatasetSpec(source=args.data, id_column=args.id_column)
    data = load_dataset(spec)
    known = {name for name, _ in data.columns}
    # one-hot columns ("color=red") may legitimately be absent when this
    # file has no row with that category; any other absence is an error
    onehot_bases = {n.partition("=")[0] for n in known if "=" in n}
    missing = [
        c.name
        for c in schema.columns
        if c.name not in known
        and not ("=" in c.name and c.name.partition("=")[0] in onehot_bases)
    ]
    if missing:
        raise SystemExit(f"model expects columns absent from {args.data}: {missing[:5]}")

    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["object", "prediction"]
        if dl.task == TASK_CLASSIFICATION:
            header.append("label")
        writer.writerow(header)
        for i, obj in enumerate(data.object_names):
            row = {name: values[i] for name, values in data.columns}
            for col in schema.columns:
                row.setdefault(col.name, 0.0)  # category unseen in this file
            desc = describe_row(schema, row)
            value = predict_value(dl, desc)
            record = [obj, f"{value:.10g}"]
            if dl.task == TASK_CLASSIFICATION:
                record.append(1 if value >= 0.5 else 0)
            writer.writerow(record)
    print(f"{len(data.object_names)} predictions -> {args.out}")
    return 0


def cmd_export_lattice(args) -> int:
    dl, concepts, schema, ctx = _train_lattice(args)
    attributes = list(ctx.attribute_names)
    if args.format == "json":
        export_lattice_json(args.out, dl, concepts, attributes)
    else:
        export_lattice_dot(args.out, dl, concepts, attributes, hide_negative=args.hide_negative)
    print(f"{len(dl.rules)} rules -> {args.out}")
    return 0


def cmd_timing(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    results = lattice_timing(sizes, n_trees=args.trees, seed=args.seed, repeats=args.repeats)
    for entry in results:
        print(
            f"n={entry['n_objects']:>8}  lattice={entry['lattice_size']:>6} concepts  "
            f"{entry['seconds']:.3f}s"
        )
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(results, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dlattice",
        description="Concept-lattice models built from decision trees and random forests",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bench", help="cross-validated benchmark on one dataset")
    _add_data_args(p)
    _add_model_args(p)
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--models", default="DT,RF_5,DL_RF_5,DL_RF_10")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--no-timings", action="store_true", help="omit wall-clock from the report")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("train", help="train a lattice model and save it")
    _add_data_args(p)
    _add_model_args(p)
    p.add_argument("--model", default="DL_RF_5", help="DL_RF_<m> or DL_DT")
    p.add_argument("--out", required=True, help="model JSON path")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="predict rows with a saved model")
    p.add_argument("--model", required=True, help="model JSON from `train`")
    p.add_argument("--data", required=True, help="CSV of rows to predict")
    p.add_argument("--id-column", help="column holding object names")
    p.add_argument("--out", required=True, help="predictions CSV path")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("export-lattice", help="train on the full data and export the lattice")
    _add_data_args(p)
    _add_model_args(p)
    p.add_argument("--model", default="DL_RF_5", help="DL_RF_<m> or DL_DT")
    p.add_argument("--format", choices=["json", "dot"], default="dot")
    p.add_argument("--hide-negative", action="store_true", help="drop !literals from DOT labels")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_lattice)

    p = sub.add_parser("timing", help="lattice-construction timing on synthetic data")
    p.add_argument("--sizes", default="1000,2000,4000")
    p.add_argument("--trees", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--out", help="write timing JSON here")
    p.set_defaults(func=cmd_timing)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
