"""Freedom sets, real freedom, and the entitlement access profile."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .order import dominates
from .types import FunctioningVector, Scenario, dedupe_by_value


def compute_freedom(s: Scenario) -> tuple[FunctioningVector, ...]:
    """The freedom set Q: every functioning some live utilization pattern yields.

    A pattern is live when its resource is present in the scenario and all of
    its lower-bound guards hold against the context vectors.  The result is
    deduplicated by vector value and ordered by representative id, so equal
    inputs always enumerate identically.
    """
    reachable = []
    for entry in s.utilization:
        if not s.has_resource(entry.resource_id):
            continue
        if all(
            s.context_value(g.context, g.component) >= g.min for g in entry.guards
        ):
            reachable.append(s.functioning(entry.output))
    deduped = dedupe_by_value(reachable)
    return tuple(sorted(deduped.values(), key=lambda fv: fv.id))


def compute_real_freedom(s: Scenario) -> tuple[FunctioningVector, ...]:
    """The real freedom set Q*: members of Q whose r-image meets every threshold."""
    theta = s.theta.values
    return tuple(
        fv for fv in compute_freedom(s) if dominates(s.r.apply(fv), theta)
    )


@dataclass(frozen=True)
class DimensionAccess:
    """Access summary for one entitlement dimension.

    max_value is None when the freedom set is empty (there is nothing to
    take a maximum over).
    """

    dimension: str
    threshold: Fraction
    max_value: Optional[Fraction]
    satisfied: bool


@dataclass(frozen=True)
class AccessProfile:
    """Per-dimension view of how close the agent's freedom comes to theta.

    ``satisfied`` on each row says some reachable functioning meets that one
    dimension's minimum; ``jointly_satisfiable`` says a single functioning
    meets all of them at once (equivalently, Q* is nonempty).  The two can
    disagree: every minimum may be reachable separately while no option
    clears them together.
    """

    entries: tuple[DimensionAccess, ...]
    jointly_satisfiable: bool

    def unsatisfied_dimensions(self) -> tuple[str, ...]:
        return tuple(e.dimension for e in self.entries if not e.satisfied)


def access_profile(s: Scenario) -> AccessProfile:
    """Summarize entitlement access over the current freedom set."""
    q = compute_freedom(s)
    images = [s.r.apply(fv) for fv in q]
    theta = s.theta.values
    names = s.schemas["E"].names
    entries = []
    for k, name in enumerate(names):
        max_value = max((img[k] for img in images), default=None)
        satisfied = max_value is not None and max_value >= theta[k]
        entries.append(
            DimensionAccess(
                dimension=name,
                threshold=theta[k],
                max_value=max_value,
                satisfied=satisfied,
            )
        )
    jointly = any(dominates(img, theta) for img in images)
    return AccessProfile(entries=tuple(entries), jointly_satisfiable=jointly)
