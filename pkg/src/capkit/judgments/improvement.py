"""Improvement relations and the two permissibility conditions.

The improvement relation between two finite functioning sets S and S' under
a valuation w is the two-clause quantified formula

    ∀b∈S ∃b'∈S' (w(b') ⪰ w(b))   and   ∃b∈S ∃b'∈S' (w(b') ≻ w(b))

with one addition: by default the engine also requires the compared sets to
actually differ (as value sets).  Without that guard the bare formula calls
an unchanged situation "improved" whenever it happens to contain an
internally dominated pair; the guard can be lifted via ``require_change``
(surfaced on the CLI as ``--strict-formula``) to study the raw formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

from ..model.freedom import AccessProfile, access_profile, compute_freedom, compute_real_freedom
from ..model.frontier import maximal_set
from ..model.order import dominates, strictly_dominates, theta_prefers
from ..model.types import FunctioningVector, Scenario, ValuationMap, dedupe_by_value

Image = Callable[[FunctioningVector], Sequence[Fraction]]
Relation = Callable[[Sequence[Fraction], Sequence[Fraction]], bool]


def _value_set(vectors: Sequence[FunctioningVector]) -> frozenset:
    return frozenset(fv.values for fv in dedupe_by_value(vectors).values())


def _improves_pairwise(
    s_set: Sequence[FunctioningVector],
    s_prime: Sequence[FunctioningVector],
    img_before: Image,
    img_after: Image,
    weak: Relation,
    strict: Relation,
    require_change: bool,
) -> bool:
    if require_change and _value_set(s_set) == _value_set(s_prime):
        return False
    for b in s_set:
        if not any(weak(img_after(bp), img_before(b)) for bp in s_prime):
            return False
    return any(
        strict(img_after(bp), img_before(b)) for b in s_set for bp in s_prime
    )


def improves(
    s_set: Sequence[FunctioningVector],
    s_prime: Sequence[FunctioningVector],
    w: ValuationMap,
    *,
    require_change: bool = True,
) -> bool:
    """Does S' improve on S under valuation w?

    Empty S is never improved on: the universal clause is vacuous but the
    existential clause has nothing to witness.
    """
    apply = w.apply if hasattr(w, "apply") else w
    return _improves_pairwise(
        s_set,
        s_prime,
        apply,
        apply,
        dominates,
        strictly_dominates,
        require_change,
    )


# ---------------------------------------------------------------------------
# Condition 1: preserve access to basic entitlements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Condition1Result:
    """Outcome of the entitlement-preservation check.

    status is "pass", "violated", or "vacuous_initially_empty".  The vacuous
    status means the agent had no threshold-satisfying option to begin with;
    the check then degrades to reporting whether access was further impeded,
    dimension by dimension.
    """

    status: str
    evidence: tuple[dict, ...]

    @property
    def violated(self) -> bool:
        return self.status == "violated"


def _profile_comparison(before: AccessProfile, after: AccessProfile) -> list[dict]:
    items = []
    for eb, ea in zip(before.entries, after.entries):
        if eb.max_value is None:
            impeded = False  # nothing was accessible before, nothing to impede
        elif ea.max_value is None:
            impeded = True
        else:
            impeded = ea.max_value < eb.max_value
        items.append(
            {
                "kind": "access_comparison",
                "dimension": eb.dimension,
                "before_max": eb.max_value,
                "after_max": ea.max_value,
                "further_impeded": impeded,
            }
        )
    return items


def condition1(before: Scenario, after: Scenario) -> Condition1Result:
    """Necessary condition: the interaction must not empty real freedom.

    Binding only when the agent starts with at least one threshold-satisfying
    option.  When violated, the evidence names every entitlement dimension
    that no post-interaction option satisfies (or records that the failure is
    joint when each dimension is separately reachable).
    """
    q_star_before = compute_real_freedom(before)
    q_star_after = compute_real_freedom(after)
    profile_after = access_profile(after)
    if not q_star_before:
        evidence = [{"kind": "initially_empty", "detail": "real freedom empty before interaction"}]
        evidence.extend(_profile_comparison(access_profile(before), profile_after))
        return Condition1Result("vacuous_initially_empty", tuple(evidence))
    if q_star_after:
        witness = q_star_after[0]
        return Condition1Result(
            "pass",
            (
                {
                    "kind": "real_freedom_witness",
                    "functioning": witness.id,
                    "count": len(q_star_after),
                },
            ),
        )
    failing = profile_after.unsatisfied_dimensions()
    evidence = []
    if failing:
        for entry in profile_after.entries:
            if not entry.satisfied:
                evidence.append(
                    {
                        "kind": "threshold_dimension_emptied",
                        "dimension": entry.dimension,
                        "threshold": entry.threshold,
                        "max_after": entry.max_value,
                    }
                )
    else:
        evidence.append(
            {
                "kind": "joint_threshold_failure",
                "detail": "every dimension is separately reachable but no "
                "single option satisfies all thresholds",
            }
        )
    return Condition1Result("violated", tuple(evidence))


# ---------------------------------------------------------------------------
# Condition 2: do not strip maximal life plans without replacement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Condition2Result:
    """Outcome of the maximal-plan replacement check."""

    status: str
    evidence: tuple[dict, ...]

    @property
    def violated(self) -> bool:
        return self.status == "violated"


def condition2(before: Scenario, after: Scenario) -> Condition2Result:
    """Every v-maximal option must keep a weakly-as-good successor.

    ∀b ∈ M(Q_before, v): ∃b' ∈ Q_after with v(b') ⪰ v(b).
    """
    m_before = maximal_set(compute_freedom(before), before.v)
    q_after = compute_freedom(after)
    after_images = [after.v.apply(bp) for bp in q_after]
    missing = []
    for b in m_before:
        target = before.v.apply(b)
        if not any(dominates(img, target) for img in after_images):
            missing.append(b)
    if missing:
        evidence = tuple(
            {
                "kind": "unreplaced_maximal_plan",
                "functioning": b.id,
                "image": tuple(before.v.apply(b)),
            }
            for b in missing
        )
        return Condition2Result("violated", evidence)
    return Condition2Result(
        "pass",
        ({"kind": "maximal_plans_replaced", "count": len(m_before)},),
    )


# ---------------------------------------------------------------------------
# Beneficence and assistance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BeneficenceFlags:
    """The three graded beneficence readings of an interaction.

    weak        -- the whole freedom set improves under the transient
                   valuation u (u falls back to v when undeclared);
    real_freedom -- the threshold-satisfying core improves under r;
    life_plan   -- the v-maximal frontier improves under v.

    ``weak_only`` labels interactions that better the agent's situation
    merely in the transient sense; reports call these out explicitly.
    """

    weak: bool
    real_freedom: bool
    life_plan: bool

    @property
    def weak_only(self) -> bool:
        return self.weak and not (self.real_freedom or self.life_plan)


def classify_beneficence(
    before: Scenario, after: Scenario, *, require_change: bool = True
) -> BeneficenceFlags:
    q_before, q_after = compute_freedom(before), compute_freedom(after)
    weak = _improves_pairwise(
        q_before,
        q_after,
        before.u.apply,
        after.u.apply,
        dominates,
        strictly_dominates,
        require_change,
    )
    real = _improves_pairwise(
        compute_real_freedom(before),
        compute_real_freedom(after),
        before.r.apply,
        after.r.apply,
        dominates,
        strictly_dominates,
        require_change,
    )
    life = _improves_pairwise(
        maximal_set(q_before, before.v),
        maximal_set(q_after, after.v),
        before.v.apply,
        after.v.apply,
        dominates,
        strictly_dominates,
        require_change,
    )
    return BeneficenceFlags(weak=weak, real_freedom=real, life_plan=life)


def _theta_relations(theta: Sequence[Fraction]) -> tuple[Relation, Relation]:
    weak = lambda a, b: theta_prefers(a, b, theta, strict=False)
    strict = lambda a, b: theta_prefers(a, b, theta, strict=True)
    return weak, strict


def assistance_real_freedom(
    before: Scenario, after: Scenario, *, require_change: bool = True
) -> bool:
    """Assistance through real freedom: Q* improves under the
    threshold-sensitive preference over r-images."""
    weak, strict = _theta_relations(before.theta.values)
    return _improves_pairwise(
        compute_real_freedom(before),
        compute_real_freedom(after),
        before.r.apply,
        after.r.apply,
        weak,
        strict,
        require_change,
    )


def assistance_life_plans(
    before: Scenario, after: Scenario, *, require_change: bool = True
) -> bool:
    """Assistance through life plans: every v-maximal option keeps a weakly
    preferred successor somewhere in the new freedom set, and at least one is
    strictly bettered.

    The definition itself demands a changed freedom set (Q' ≠ Q), so that
    requirement stays even when ``require_change`` is lifted; the flag only
    controls the engine's additional guard, which here coincides with the
    definitional one.

    When the scenario declares an aspiration threshold over P-space
    (``theta_p``), the comparison is threshold-sensitive; otherwise it is
    plain Pareto.
    """
    q_before, q_after = compute_freedom(before), compute_freedom(after)
    if _value_set(q_before) == _value_set(q_after):
        return False
    if before.theta_p is not None:
        weak, strict = _theta_relations(before.theta_p.values)
    else:
        weak, strict = dominates, strictly_dominates
    return _improves_pairwise(
        maximal_set(q_before, before.v),
        q_after,
        before.v.apply,
        after.v.apply,
        weak,
        strict,
        require_change=False,  # the Q' ≠ Q requirement above already holds
    )


@dataclass(frozen=True)
class AssistanceFlags:
    real_freedom: bool
    life_plans: bool
