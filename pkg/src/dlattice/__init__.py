"""dlattice: rule-based prediction by closing decision-tree premises into
formal concepts and averaging the maximal covering rules."""

from .context import (
    TASK_CLASSIFICATION,
    TASK_REGRESSION,
    BitVec,
    ColumnScaling,
    FormalContext,
    ScalingSchema,
    build_context,
    describe_external,
    fit_schema,
    scale_table,
)
from .decision import (
    DecisionLattice,
    build_rules,
    covering_rules,
    maximal_rules,
    predict_label,
    predict_value,
)
from .forest import (
    ForestConfig,
    ForestModel,
    bootstrap_sample,
    fit_forest,
    predict_forest,
)
from .lattice import (
    Concept,
    ConceptSet,
    concepts_from_forest,
    concepts_from_tree,
    is_subconcept,
)
from .oracle import enumerate_concepts, is_formal_concept
from .tree import (
    ClassificationRule,
    DecisionTreeModel,
    MalformedDescriptionError,
    Targets,
    TreeConfig,
    best_split,
    extract_rules,
    fit_tree,
    impurity,
    predict_tree,
)

__version__ = "0.1.0"

__all__ = [
    "TASK_CLASSIFICATION",
    "TASK_REGRESSION",
    "BitVec",
    "ColumnScaling",
    "FormalContext",
    "ScalingSchema",
    "build_context",
    "describe_external",
    "fit_schema",
    "scale_table",
    "DecisionLattice",
    "build_rules",
    "covering_rules",
    "maximal_rules",
    "predict_label",
    "predict_value",
    "ForestConfig",
    "ForestModel",
    "bootstrap_sample",
    "fit_forest",
    "predict_forest",
    "Concept",
    "ConceptSet",
    "concepts_from_forest",
    "concepts_from_tree",
    "is_subconcept",
    "enumerate_concepts",
    "is_formal_concept",
    "ClassificationRule",
    "DecisionTreeModel",
    "MalformedDescriptionError",
    "Targets",
    "TreeConfig",
    "best_split",
    "extract_rules",
    "fit_tree",
    "impurity",
    "predict_tree",
]
