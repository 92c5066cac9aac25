"""Interaction records, delta application, and trace materialization."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Optional

from ..errors import DeltaError, TraceError
from ..model.freedom import compute_freedom
from ..model.types import (
    FunctioningVector,
    ResourceVector,
    Scenario,
    UtilizationEntry,
    ValuationMap,
)


@dataclass(frozen=True)
class InteractionDeltas:
    """What an interaction changes about the target's situation.

    Deltas touch resources, conversion context, and utilization patterns
    only; the functioning catalog, the valuation maps, and the thresholds
    describe who the agent is and are preserved.
    """

    resources_added: tuple[ResourceVector, ...] = ()
    resources_removed: tuple[str, ...] = ()
    characteristics_delta: Mapping[str, Fraction] = field(default_factory=dict)
    social_delta: Mapping[str, Fraction] = field(default_factory=dict)
    utilization_added: tuple[UtilizationEntry, ...] = ()
    utilization_removed: tuple[str, ...] = ()


@dataclass(frozen=True)
class InteractionRecord:
    """One agent acting on another, with its declared normative facts.

    The boolean and enum fields (intent, mechanisms, actor_has_right,
    communication_feasible, proportionality_ok, unfair_terms) are inputs to
    judgment, not outputs of it: the engine evaluates what follows from the
    record as declared and never infers mental states.
    """

    id: str
    actor_id: str
    target: str
    deltas: InteractionDeltas
    intent: str
    mechanisms: tuple[str, ...]
    actor_has_right: bool
    communication_feasible: bool
    proportionality_ok: bool
    unfair_terms: bool = False
    promoted_outcome: Optional[str] = None
    actor_estimate_of_target_values: Optional[ValuationMap] = None
    believed_scenario: Optional[Scenario] = None
    threat_scenario: Optional[Scenario] = None


def apply_interaction(s: Scenario, rec: InteractionRecord) -> Scenario:
    """Produce the post-interaction scenario from declared deltas.

    Application order is fixed: resource removals, resource additions,
    context offsets, utilization removals, then utilization additions.
    Removing a resource silently disables utilization entries that depended
    on it; every other dangling reference is an error.  An empty delta
    yields a scenario equal to the input.
    """
    d = rec.deltas

    resources = list(s.resources)
    for rid in d.resources_removed:
        match = [res for res in resources if res.id == rid]
        if not match:
            raise DeltaError(
                f"interaction {rec.id!r} removes unknown resource {rid!r}"
            )
        resources.remove(match[0])
    surviving_ids = {res.id for res in resources}
    for res in d.resources_added:
        if res.id in surviving_ids:
            raise DeltaError(
                f"interaction {rec.id!r} adds resource {res.id!r} which already exists"
            )
        if len(res.values) != len(s.resource_schema):
            raise DeltaError(
                f"interaction {rec.id!r} adds resource {res.id!r} with "
                f"{len(res.values)} components; resource schema has "
                f"{len(s.resource_schema)}"
            )
        resources.append(res)
        surviving_ids.add(res.id)

    characteristics = dict(s.characteristics)
    for name, offset in d.characteristics_delta.items():
        if name not in characteristics:
            raise DeltaError(
                f"interaction {rec.id!r} shifts unknown characteristic {name!r}"
            )
        characteristics[name] = characteristics[name] + offset
    social = dict(s.social)
    for name, offset in d.social_delta.items():
        if name not in social:
            raise DeltaError(
                f"interaction {rec.id!r} shifts unknown social component {name!r}"
            )
        social[name] = social[name] + offset

    utilization = list(s.utilization)
    for pid in d.utilization_removed:
        match = [u for u in utilization if u.pattern_id == pid]
        if not match:
            raise DeltaError(
                f"interaction {rec.id!r} removes unknown utilization pattern {pid!r}"
            )
        utilization.remove(match[0])
    # Entries whose resource was just removed are disabled alongside it.
    utilization = [u for u in utilization if u.resource_id in surviving_ids]
    existing_patterns = {u.pattern_id for u in utilization}
    for entry in d.utilization_added:
        if entry.pattern_id in existing_patterns:
            raise DeltaError(
                f"interaction {rec.id!r} adds utilization pattern "
                f"{entry.pattern_id!r} which already exists"
            )
        if entry.resource_id not in surviving_ids:
            raise DeltaError(
                f"interaction {rec.id!r} adds pattern {entry.pattern_id!r} over "
                f"unknown resource {entry.resource_id!r}"
            )
        if not s.has_functioning(entry.output):
            raise DeltaError(
                f"interaction {rec.id!r} adds pattern {entry.pattern_id!r} with "
                f"unknown output functioning {entry.output!r}"
            )
        for g in entry.guards:
            ctx = characteristics if g.context == "characteristics" else social
            if g.component not in ctx:
                raise DeltaError(
                    f"interaction {rec.id!r} adds pattern {entry.pattern_id!r} "
                    f"guarded on unknown {g.context} component {g.component!r}"
                )
        utilization.append(entry)
        existing_patterns.add(entry.pattern_id)

    return replace(
        s,
        resources=tuple(resources),
        characteristics=characteristics,
        social=social,
        utilization=tuple(utilization),
    )


@dataclass(frozen=True)
class TraceStep:
    """One link in a trace: an interaction plus what was chosen and desired."""

    interaction: str
    target_choice: str
    actor_desired: str


@dataclass(frozen=True)
class Trace:
    """An ordered sequence of interactions on the same target."""

    id: str
    steps: tuple[TraceStep, ...]


@dataclass(frozen=True)
class MaterializedStep:
    """A trace step resolved against its chained before/after scenarios."""

    index: int
    record: InteractionRecord
    before: Scenario
    after: Scenario
    target_choice: FunctioningVector
    actor_desired: FunctioningVector


def materialize_trace(
    base: Scenario,
    records: Mapping[str, InteractionRecord],
    trace: Trace,
) -> tuple[MaterializedStep, ...]:
    """Chain a trace: each step's after-scenario is the next step's before.

    Raises TraceError when the trace is empty, references an unknown
    interaction or functioning, declares a choice outside the step's
    freedom set, or a step's deltas no longer apply to the chained scenario.
    """
    if not trace.steps:
        raise TraceError(f"trace {trace.id!r} has no steps")
    out = []
    current = base
    for index, step in enumerate(trace.steps):
        rec = records.get(step.interaction)
        if rec is None:
            raise TraceError(
                f"trace {trace.id!r} step {index} references unknown "
                f"interaction {step.interaction!r}"
            )
        try:
            after = apply_interaction(current, rec)
        except DeltaError as exc:
            raise TraceError(
                f"trace {trace.id!r} does not chain at step {index}: {exc}"
            ) from exc
        for label, fv_id in (
            ("target_choice", step.target_choice),
            ("actor_desired", step.actor_desired),
        ):
            if not after.has_functioning(fv_id):
                raise TraceError(
                    f"trace {trace.id!r} step {index} {label} {fv_id!r} is not "
                    "in the functioning catalog"
                )
        choice = after.functioning(step.target_choice)
        q_after_values = {fv.values for fv in compute_freedom(after)}
        if choice.values not in q_after_values:
            raise TraceError(
                f"trace {trace.id!r} step {index} target_choice "
                f"{step.target_choice!r} is not realizable after the step"
            )
        out.append(
            MaterializedStep(
                index=index,
                record=rec,
                before=current,
                after=after,
                target_choice=choice,
                actor_desired=after.functioning(step.actor_desired),
            )
        )
        current = after
    return tuple(out)
