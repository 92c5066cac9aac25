"""capkit: a finite-domain evaluation engine for capability scenarios.

The package models one agent's situation as fully enumerated finite sets --
functionings, resources, conversion context, utilization patterns, exact
rational valuations, and entitlement thresholds -- and evaluates freedom
sets, Pareto frontiers, interaction permissibility conditions, benefit and
assistance classifications, and failure-mode detectors over them.  Every
quantified condition is decided exactly, by exhaustive enumeration, with no
floating point anywhere.

The names re-exported here are the supported library surface; the
submodules hold the rest.
"""

__version__ = "0.1.0"

from .errors import (
    CapkitError,
    DeltaError,
    DocumentError,
    IncompleteRecordError,
    InternalInvariantError,
    SchemaError,
    TraceError,
    ValuationError,
)
from .judgments import (
    InteractionDeltas,
    InteractionRecord,
    Verdict,
    apply_interaction,
    classify_beneficence,
    condition1,
    condition2,
    judge,
    materialize_trace,
)
from .model import (
    FunctioningVector,
    Scenario,
    ValuationMap,
    compute_freedom,
    compute_real_freedom,
    dominates,
    maximal_set,
    strictly_dominates,
    theta_prefers,
)
from .scenario_io import (
    Diagnostic,
    ScenarioDocument,
    deep_validate,
    parse_document,
    serialize_document,
    serialize_scenario,
)

__all__ = [
    "CapkitError",
    "DeltaError",
    "Diagnostic",
    "DocumentError",
    "FunctioningVector",
    "IncompleteRecordError",
    "InteractionDeltas",
    "InteractionRecord",
    "InternalInvariantError",
    "Scenario",
    "ScenarioDocument",
    "SchemaError",
    "TraceError",
    "ValuationError",
    "ValuationMap",
    "Verdict",
    "__version__",
    "apply_interaction",
    "classify_beneficence",
    "compute_freedom",
    "compute_real_freedom",
    "condition1",
    "condition2",
    "deep_validate",
    "dominates",
    "judge",
    "materialize_trace",
    "maximal_set",
    "parse_document",
    "serialize_document",
    "serialize_scenario",
    "strictly_dominates",
    "theta_prefers",
]
