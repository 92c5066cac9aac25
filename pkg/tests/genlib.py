"""Seeded random generators shared by the property and acceptance suites.

Everything takes an explicit ``random.Random`` so that every test run is
reproducible from its seed.  Generated scenarios are deliberately small
(a handful of dimensions, at most a dozen or so vectors) but exercise the
awkward corners: duplicate vector values, guarded utilization patterns that
fail, resources nothing converts, thresholds nothing satisfies, and
transient valuations that disagree with the considered one.
"""

from __future__ import annotations

import random
from fractions import Fraction

from capkit.model.types import (
    Dimension,
    DimensionSchema,
    FunctioningVector,
    Guard,
    ResourceVector,
    Scenario,
    ThresholdVector,
    UtilizationEntry,
    ValuationMap,
)

# Small exact rationals, including negatives and non-integers, so dominance
# comparisons hit every branch and nothing accidentally relies on ints.
RATIONAL_POOL: tuple[Fraction, ...] = tuple(
    sorted(
        {
            Fraction(p, q)
            for q in (1, 2, 3)
            for p in range(-2 * q, 3 * q + 1)
        }
    )
)

# Thresholds come from a middle band so that real freedom is neither almost
# always empty nor almost always everything.
THRESHOLD_POOL: tuple[Fraction, ...] = (
    Fraction(0),
    Fraction(1, 2),
    Fraction(1),
    Fraction(3, 2),
    Fraction(2),
)

LEVEL_POOL: tuple[Fraction, ...] = (Fraction(0), Fraction(1), Fraction(2))


def rational(rng: random.Random) -> Fraction:
    return rng.choice(RATIONAL_POOL)


def vector(rng: random.Random, n: int) -> tuple[Fraction, ...]:
    return tuple(rng.choice(RATIONAL_POOL) for _ in range(n))


def functioning_vectors(
    rng: random.Random, count: int, n_dims: int, prefix: str = "b"
) -> tuple[FunctioningVector, ...]:
    """Distinct-id vectors; some deliberately share values to exercise dedup."""
    out: list[FunctioningVector] = []
    for i in range(count):
        if out and rng.random() < 0.15:
            values = rng.choice(out).values
        else:
            values = vector(rng, n_dims)
        out.append(FunctioningVector(id=f"{prefix}{i:03d}", values=values))
    return tuple(out)


def table_map(
    rng: random.Random,
    map_id: str,
    functionings,
    n_out: int,
) -> ValuationMap:
    """A total table map assigning equal images to equal-valued vectors."""
    by_value: dict[tuple, tuple] = {}
    entries: dict[str, tuple] = {}
    for fv in functionings:
        img = by_value.get(fv.values)
        if img is None:
            img = vector(rng, n_out)
            by_value[fv.values] = img
        entries[fv.id] = img
    return ValuationMap(map_id=map_id, form="table", entries=entries)


def _extend_table_map(
    rng: random.Random,
    base_map: ValuationMap,
    old_functionings,
    new_functionings,
    n_out: int,
) -> ValuationMap:
    """Extend a table map over new vectors, preserving image consistency."""
    by_value = {fv.values: base_map.entries[fv.id] for fv in old_functionings}
    entries = dict(base_map.entries)
    for fv in new_functionings:
        img = by_value.get(fv.values)
        if img is None:
            img = vector(rng, n_out)
            by_value[fv.values] = img
        entries[fv.id] = img
    return ValuationMap(map_id=base_map.map_id, form="table", entries=entries)


def _utilization_for(
    rng: random.Random,
    functionings,
    resources,
    start_index: int = 0,
    coverage: float = 0.9,
) -> list[UtilizationEntry]:
    entries = []
    i = start_index
    for fv in functionings:
        if rng.random() >= coverage:
            continue
        guards: tuple[Guard, ...] = ()
        if rng.random() < 0.3:
            context = rng.choice(("characteristics", "social"))
            component = "skill" if context == "characteristics" else "support"
            guards = (
                Guard(
                    context=context,
                    component=component,
                    min=rng.choice(LEVEL_POOL),
                ),
            )
        entries.append(
            UtilizationEntry(
                pattern_id=f"f{i:03d}",
                resource_id=rng.choice(resources).id,
                guards=guards,
                output=fv.id,
            )
        )
        i += 1
    return entries


def scenario(
    rng: random.Random,
    *,
    max_b: int = 4,
    max_e: int = 3,
    max_p: int = 3,
    max_vectors: int = 8,
    with_u: bool | None = None,
) -> Scenario:
    """One random, internally consistent scenario."""
    n_b = rng.randint(1, max_b)
    n_e = rng.randint(1, max_e)
    n_p = rng.randint(1, max_p)
    schemas = {
        "B": DimensionSchema("B", tuple(Dimension(f"being_{k}") for k in range(n_b))),
        "E": DimensionSchema("E", tuple(Dimension(f"entitlement_{k}") for k in range(n_e))),
        "P": DimensionSchema("P", tuple(Dimension(f"plan_{k}") for k in range(n_p))),
    }
    functionings = functioning_vectors(rng, rng.randint(1, max_vectors), n_b)
    resources = tuple(
        ResourceVector(id=f"x{i}", values=vector(rng, 1))
        for i in range(rng.randint(1, 2))
    )
    characteristics = {"skill": rng.choice(LEVEL_POOL)}
    social = {"support": rng.choice(LEVEL_POOL)}
    utilization = tuple(_utilization_for(rng, functionings, resources))
    maps = {
        "v": table_map(rng, "v", functionings, n_p),
        "r": table_map(rng, "r", functionings, n_e),
    }
    use_u = (rng.random() < 0.4) if with_u is None else with_u
    if use_u:
        n_u = rng.randint(1, 3)
        schemas["U"] = DimensionSchema(
            "U", tuple(Dimension(f"transient_{k}") for k in range(n_u))
        )
        maps["u"] = table_map(rng, "u", functionings, n_u)
    theta = ThresholdVector(tuple(rng.choice(THRESHOLD_POOL) for _ in range(n_e)))
    theta_p = None
    if rng.random() < 0.3:
        theta_p = ThresholdVector(
            tuple(rng.choice(THRESHOLD_POOL) for _ in range(n_p))
        )
    return Scenario(
        agent_id="agent",
        schemas=schemas,
        resource_schema=(Dimension("goods"),),
        resources=resources,
        characteristics=characteristics,
        social=social,
        functionings=functionings,
        utilization=utilization,
        maps=maps,
        theta=theta,
        theta_p=theta_p,
    )


def successor(rng: random.Random, base: Scenario) -> Scenario:
    """A mutated after-scenario sharing the base's schemas and thresholds.

    Mutations cover every delta an interaction can make -- vector gain/loss
    via utilization churn, resource churn, and context shifts -- plus
    catalog growth, which traces cannot produce but the raw improvement
    formulas must still handle.  With some probability the base is returned
    unchanged, so differential tests see the no-change diagonal often.
    """
    if rng.random() < 0.15:
        return base

    n_b = len(base.schemas["B"])
    kept = tuple(fv for fv in base.functionings if rng.random() < 0.85)
    new: list[FunctioningVector] = []
    for i in range(rng.randint(0, 3)):
        if base.functionings and rng.random() < 0.2:
            values = rng.choice(base.functionings).values
        else:
            values = vector(rng, n_b)
        new.append(FunctioningVector(id=f"n{i:03d}", values=values))
    functionings = kept + tuple(new)

    resources = list(base.resources)
    if len(resources) > 1 and rng.random() < 0.2:
        resources.pop(rng.randrange(len(resources)))
    if rng.random() < 0.3:
        resources.append(ResourceVector(id="x_extra", values=vector(rng, 1)))
    resources = tuple(resources)

    characteristics = dict(base.characteristics)
    if rng.random() < 0.3:
        characteristics["skill"] = characteristics["skill"] + rng.choice(
            (Fraction(-1), Fraction(1))
        )
    social = dict(base.social)
    if rng.random() < 0.3:
        social["support"] = social["support"] + rng.choice(
            (Fraction(-1), Fraction(1))
        )

    surviving = {res.id for res in resources}
    utilization = [
        entry
        for entry in base.utilization
        if entry.output in {fv.id for fv in kept} and entry.resource_id in surviving
        and rng.random() < 0.9
    ]
    utilization.extend(
        _utilization_for(rng, new, resources, start_index=500)
    )

    maps = {
        "v": _extend_table_map(
            rng, base.maps["v"], base.functionings, new, len(base.schemas["P"])
        ),
        "r": _extend_table_map(
            rng, base.maps["r"], base.functionings, new, len(base.schemas["E"])
        ),
    }
    if "u" in base.maps:
        maps["u"] = _extend_table_map(
            rng, base.maps["u"], base.functionings, new, len(base.schemas["U"])
        )

    return Scenario(
        agent_id=base.agent_id,
        schemas=base.schemas,
        resource_schema=base.resource_schema,
        resources=resources,
        characteristics=characteristics,
        social=social,
        functionings=functionings,
        utilization=tuple(utilization),
        maps=maps,
        theta=base.theta,
        theta_p=base.theta_p,
    )
