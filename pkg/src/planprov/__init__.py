"""planprov: HTN planning with provenance, PROV graph mapping, and
counterfactual plan explanation."""

from .model import (
    Appraisal,
    ProvEdge,
    ProvGraph,
    ProvNode,
)
from .logic import Axiom, Literal, parse_literal, prove
from .htn import (
    Domain,
    PlanTree,
    Problem,
    all_plans,
    replay,
    seek_plan,
)
from .mapping import MappingReport, attach_appraisal, plan_to_prov
from .environments import Label, compute_labels, contract, is_necessary
from .dynamics import Overlay, impact, pertinence, propagate_confidence, support_fixpoint
from .catalog import Catalog, build_catalog, class_members
from .explain import Explanation, answer

__version__ = "0.1.0"

__all__ = [
    "Appraisal",
    "Axiom",
    "Catalog",
    "Domain",
    "Explanation",
    "Label",
    "Literal",
    "MappingReport",
    "Overlay",
    "PlanTree",
    "Problem",
    "ProvEdge",
    "ProvGraph",
    "ProvNode",
    "all_plans",
    "answer",
    "attach_appraisal",
    "build_catalog",
    "class_members",
    "compute_labels",
    "contract",
    "impact",
    "is_necessary",
    "parse_literal",
    "pertinence",
    "plan_to_prov",
    "propagate_confidence",
    "prove",
    "replay",
    "seek_plan",
    "support_fixpoint",
]
