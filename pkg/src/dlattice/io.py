"""Model persistence and lattice export (JSON and Graphviz DOT).

The model format is versioned JSON carrying the scaling schema, the
literal alphabet, the rules (premises as literal names), the fallback and
the task; it is everything `predict` needs without the training data.
"""

from __future__ import annotations

import json
from typing import List, Optional, Tuple

from .context import BitVec, ColumnScaling, ScalingSchema
from .decision import DecisionLattice
from .lattice import ConceptSet
from .tree import ClassificationRule

MODEL_FORMAT = "dlattice-model"
LATTICE_FORMAT = "dlattice-lattice"
FORMAT_VERSION = 1


def _schema_to_dict(schema: ScalingSchema) -> dict:
    return {
        "columns": [
            {"name": c.name, "kind": c.kind, "thresholds": list(c.thresholds)}
            for c in schema.columns
        ]
    }


def _schema_from_dict(data: dict) -> ScalingSchema:
    return ScalingSchema(
        tuple(
            ColumnScaling(c["name"], c["kind"], tuple(c["thresholds"]))
            for c in data["columns"]
        )
    )


def _rules_to_dicts(dl: DecisionLattice, attributes: List[str]) -> list:
    out = []
    for r in dl.rules:
        out.append(
            {
                "premise": [attributes[j] for j in r.premise],
                "prediction": r.prediction,
                "support": r.support,
            }
        )
    return out


def _rules_from_dicts(items: list, attributes: List[str]) -> list:
    index = {name: j for j, name in enumerate(attributes)}
    rules = []
    for item in items:
        premise = BitVec.from_indices(len(attributes), (index[n] for n in item["premise"]))
        rules.append(ClassificationRule(premise, item["prediction"], item["support"]))
    return rules


def save_model(
    path: str, dl: DecisionLattice, schema: ScalingSchema, attributes: List[str]
) -> None:
    payload = {
        "format": MODEL_FORMAT,
        "version": FORMAT_VERSION,
        "task": dl.task,
        "fallback": dl.fallback,
        "schema": _schema_to_dict(schema),
        "attributes": list(attributes),
        "rules": _rules_to_dicts(dl, list(attributes)),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path: str) -> Tuple[DecisionLattice, ScalingSchema, List[str]]:
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("format") != MODEL_FORMAT:
        raise ValueError(f"{path}: not a model file")
    if payload.get("version") != FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported model version {payload.get('version')}")
    attributes = list(payload["attributes"])
    rules = _rules_from_dicts(payload["rules"], attributes)
    dl = DecisionLattice(rules, payload["fallback"], payload["task"])
    return dl, _schema_from_dict(payload["schema"]), attributes


def _hasse_parents(extents: List[BitVec]) -> List[List[int]]:
    """For each node, the ids of its minimal strict extent-supersets."""
    n = len(extents)
    order = sorted(range(n), key=lambda i: len(extents[i]))
    parents: List[List[int]] = [[] for _ in range(n)]
    for pos, i in enumerate(order):
        ups = [j for j in order[pos + 1 :] if extents[i] < extents[j]]
        minimal = [
            j for j in ups if not any(extents[k] < extents[j] for k in ups if k != j)
        ]
        parents[i] = sorted(minimal)
    return parents


def lattice_nodes(dl: DecisionLattice, concepts: ConceptSet, attributes: List[str]) -> list:
    """Rule nodes with extent sizes and covering (Hasse) edges.

    Concepts must be the set the lattice was built from; empty-extent
    concepts carry no rule and are skipped.
    """
    by_premise = {r.premise.mask: r for r in dl.rules}
    kept = [c for c in concepts if c.extent and c.intent.mask in by_premise]
    if len(kept) != len(dl.rules):
        raise ValueError("concepts do not match the lattice's rules")
    parents = _hasse_parents([c.extent for c in kept])
    nodes = []
    for i, concept in enumerate(kept):
        rule = by_premise[concept.intent.mask]
        nodes.append(
            {
                "id": i,
                "intent": [attributes[j] for j in rule.premise],
                "extent_size": len(concept.extent),
                "prediction": rule.prediction,
                "parents": parents[i],
            }
        )
    return nodes


def export_lattice_json(
    path: str,
    dl: DecisionLattice,
    concepts: ConceptSet,
    attributes: List[str],
) -> None:
    payload = {
        "format": LATTICE_FORMAT,
        "version": FORMAT_VERSION,
        "task": dl.task,
        "fallback": dl.fallback,
        "attributes": list(attributes),
        "nodes": lattice_nodes(dl, concepts, list(attributes)),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_lattice_json(path: str) -> Tuple[DecisionLattice, List[str]]:
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("format") != LATTICE_FORMAT:
        raise ValueError(f"{path}: not a lattice export")
    attributes = list(payload["attributes"])
    index = {name: j for j, name in enumerate(attributes)}
    rules = []
    for node in payload["nodes"]:
        premise = BitVec.from_indices(len(attributes), (index[n] for n in node["intent"]))
        rules.append(ClassificationRule(premise, node["prediction"], node["extent_size"]))
    return DecisionLattice(rules, payload["fallback"], payload["task"]), attributes


def export_lattice_dot(
    path: str,
    dl: DecisionLattice,
    concepts: ConceptSet,
    attributes: List[str],
    hide_negative: bool = False,
) -> None:
    """Hasse diagram, general rules above specific ones.

    `hide_negative` drops "!"-prefixed literals from node labels (the
    structure is unchanged); handy because negative literals crowd labels.
    """
    nodes = lattice_nodes(dl, concepts, list(attributes))
    lines = ["digraph lattice {", "\trankdir=TB;", '\tnode [shape=box, fontsize=10];']
    for node in nodes:
        shown = [
            lit for lit in node["intent"] if not (hide_negative and lit.startswith("!"))
        ]
        premise = " & ".join(shown) if shown else "<any>"
        label = f"{premise}\\n{node['prediction']:g} (n={node['extent_size']})"
        lines.append(f'\t"{node["id"]}" [label="{label}"];')
    for node in nodes:
        for parent in node["parents"]:
            lines.append(f'\t"{parent}" -> "{node["id"]}";')
    lines.append("}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
