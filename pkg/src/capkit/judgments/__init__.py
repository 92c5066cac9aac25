"""Judgment layer: interactions, permissibility conditions, and detectors."""

from .failures import (
    DominationResult,
    Finding,
    PaternalismResult,
    detect_coercion,
    detect_deception,
    detect_domination,
    detect_exploitation,
    paternalism_check,
)
from .improvement import (
    AssistanceFlags,
    BeneficenceFlags,
    Condition1Result,
    Condition2Result,
    assistance_life_plans,
    assistance_real_freedom,
    classify_beneficence,
    condition1,
    condition2,
    improves,
)
from .records import (
    InteractionDeltas,
    InteractionRecord,
    MaterializedStep,
    Trace,
    TraceStep,
    apply_interaction,
    materialize_trace,
)
from .verdict import Verdict, judge

__all__ = [
    "AssistanceFlags",
    "BeneficenceFlags",
    "Condition1Result",
    "Condition2Result",
    "DominationResult",
    "Finding",
    "InteractionDeltas",
    "InteractionRecord",
    "MaterializedStep",
    "PaternalismResult",
    "Trace",
    "TraceStep",
    "Verdict",
    "apply_interaction",
    "assistance_life_plans",
    "assistance_real_freedom",
    "classify_beneficence",
    "condition1",
    "condition2",
    "detect_coercion",
    "detect_deception",
    "detect_domination",
    "detect_exploitation",
    "improves",
    "judge",
    "materialize_trace",
    "paternalism_check",
]
