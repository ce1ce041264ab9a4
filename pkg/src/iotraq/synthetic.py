"""Deterministic generators for synthetic taxonomies and assessments.

Used by the property-test suites and the benchmark script.  Everything is
driven by a caller-supplied ``random.Random`` so cases are reproducible.
"""

from __future__ import annotations

import random

from .assessment import AssessmentBundle, Organization
from .maturity import IMPLEMENTATION_LADDER, ControlScores
from .risk import ImpactWeights, PrevalencyScores, RiskScale, ThreatActorProfile
from .sensitivity import SensitivityConfig
from .taxonomy import (
    ActionAssetRequirement,
    ActionElement,
    AssetElement,
    Audience,
    Control,
    ControlKind,
    DomainName,
    MechanismCategory,
    PropertyElement,
    PropertyKind,
    RiskDomain,
    SubDimension,
    TaxonomyBundle,
    VulnerabilityActionMap,
    VulnerabilityCategory,
    VulnerabilityElement,
    VulnerabilityPropertyMap,
)


def synthetic_taxonomy(
    rng: random.Random,
    n_vulnerabilities: int = 5,
    n_controls: int = 6,
    n_actions: int = 4,
    n_assets: int = 12,
) -> TaxonomyBundle:
    """A structurally valid random taxonomy with all nine risk domains."""
    domains = tuple(
        RiskDomain(id=f"domain.{name.value.replace('_', '-')}", name=name) for name in DomainName
    )

    sub_dimensions = list(SubDimension)
    assets = tuple(
        AssetElement(
            id=f"asset-{i:03d}",
            sub_dimension=sub_dimensions[i % len(sub_dimensions)],
            label=f"Synthetic asset {i}",
        )
        for i in range(n_assets)
    )
    assets_by_sub: dict[SubDimension, list[str]] = {sub: [] for sub in sub_dimensions}
    for a in assets:
        assets_by_sub[a.sub_dimension].append(a.id)

    mechanisms = list(MechanismCategory)
    actions = tuple(
        ActionElement(
            id=f"action-{i:03d}",
            mechanism_category=mechanisms[i % len(mechanisms)],
            pattern_category=f"{mechanisms[i % len(mechanisms)].value}.patterns",
            pattern=f"pattern-{i:03d}",
            label=f"Synthetic action {i}",
        )
        for i in range(n_actions)
    )

    categories = list(VulnerabilityCategory)
    vulnerabilities = tuple(
        VulnerabilityElement(
            id=f"vuln-{i:03d}",
            category=categories[i % len(categories)],
            sub_category=f"subcat-{i % 4}",
            label=f"Synthetic vulnerability {i}",
            risk_domain=domains[i % len(domains)].id,
        )
        for i in range(n_vulnerabilities)
    )

    properties = tuple(
        PropertyElement(id=f"prop.{kind.value}", kind=kind, label=kind.value.title())
        for kind in PropertyKind
    )

    requirements = []
    for action in actions:
        required: dict[SubDimension, frozenset[str]] = {}
        for sub in sub_dimensions:
            pool = assets_by_sub[sub]
            if pool and rng.random() < 0.6:
                count = rng.randint(1, min(2, len(pool)))
                required[sub] = frozenset(rng.sample(pool, count))
        if required or rng.random() < 0.5:
            requirements.append(ActionAssetRequirement(action=action.id, required_assets=required))

    action_maps = tuple(
        VulnerabilityActionMap(
            vulnerability=v.id,
            exploiting_actions=frozenset(rng.sample([a.id for a in actions], rng.randint(1, min(3, len(actions))))),
        )
        for v in vulnerabilities
    )
    property_maps = tuple(
        VulnerabilityPropertyMap(
            vulnerability=v.id,
            compromised_properties=frozenset(
                rng.sample([p.id for p in properties], rng.randint(1, min(3, len(properties))))
            ),
        )
        for v in vulnerabilities
    )

    audiences = list(Audience)
    kinds = list(ControlKind)
    controls = tuple(
        Control(
            id=f"ctrl-{i:03d}",
            risk_domain=domains[i % len(domains)].id,
            audience=audiences[i % len(audiences)],
            kind=kinds[i % len(kinds)],
            label=f"Synthetic control {i}",
            mitigated_vulnerabilities=frozenset(
                rng.sample([v.id for v in vulnerabilities], rng.randint(1, min(3, len(vulnerabilities))))
            ),
        )
        for i in range(n_controls)
    )

    return TaxonomyBundle(
        version=f"synthetic-{rng.randrange(10**6):06d}",
        assets=assets,
        actions=actions,
        vulnerabilities=vulnerabilities,
        properties=properties,
        risk_domains=domains,
        controls=controls,
        action_asset_requirements=tuple(requirements),
        vulnerability_action_maps=action_maps,
        vulnerability_property_maps=property_maps,
    )


def synthetic_actors(rng: random.Random, taxonomy: TaxonomyBundle, n_actors: int) -> tuple[ThreatActorProfile, ...]:
    actors = []
    for i in range(n_actors):
        asset_likelihoods = {
            a.id: round(rng.random(), 6) for a in taxonomy.assets if rng.random() > 0.15
        }
        action_likelihoods = {
            a.id: round(rng.random(), 6) for a in taxonomy.actions if rng.random() > 0.15
        }
        actors.append(
            ThreatActorProfile(
                id=f"actor-{i:02d}",
                label=f"Synthetic actor {i}",
                asset_likelihoods=asset_likelihoods,
                action_likelihoods=action_likelihoods,
            )
        )
    return tuple(actors)


def synthetic_assessment(
    rng: random.Random,
    taxonomy: TaxonomyBundle,
    n_actors: int = 2,
    assessment_id: str = "synthetic-assessment",
    zero_prevalency_share: float = 0.1,
    scale: RiskScale | None = None,
) -> AssessmentBundle:
    max_weight = 10.0
    weights = {p.id: round(rng.uniform(0.0, max_weight), 6) for p in taxonomy.properties}
    prevalency = {
        v.id: 0.0 if rng.random() < zero_prevalency_share else round(rng.random(), 6)
        for v in taxonomy.vulnerabilities
    }
    if all(p == 0.0 for p in prevalency.values()) and prevalency:
        # keep the assessment computable: normalization needs something at risk
        first = sorted(prevalency)[0]
        prevalency[first] = 0.5
    implementation = {
        c.id: rng.choice(IMPLEMENTATION_LADDER) for c in taxonomy.controls if rng.random() > 0.2
    }
    effectiveness = {c.id: round(rng.uniform(0.3, 1.0), 6) for c in taxonomy.controls}
    roles = rng.choice(
        [(Audience.PRODUCER,), (Audience.CONSUMER,), (Audience.PRODUCER, Audience.CONSUMER)]
    )
    return AssessmentBundle(
        id=assessment_id,
        organization=Organization(name="Synthetic Org", roles=roles),
        taxonomy_ref=taxonomy.version,
        threat_actors=synthetic_actors(rng, taxonomy, n_actors),
        prevalency=PrevalencyScores(scores=prevalency),
        impacts=ImpactWeights(weights=weights, max_weight=max_weight),
        control_scores=ControlScores(implementation=implementation, effectiveness=effectiveness),
        scale=scale if scale is not None else RiskScale(r_min=0.0, r_max=100.0),
        sensitivity=SensitivityConfig(),
    )


def performance_case() -> tuple[TaxonomyBundle, AssessmentBundle]:
    """The desk-scale sizing target: 100 vulnerabilities, 200 controls, 5 actors, 50 actions."""
    rng = random.Random(20260809)
    taxonomy = synthetic_taxonomy(rng, n_vulnerabilities=100, n_controls=200, n_actions=50, n_assets=30)
    assessment = synthetic_assessment(
        rng,
        taxonomy,
        n_actors=5,
        assessment_id="performance-case",
        zero_prevalency_share=0.0,
    )
    return taxonomy, assessment
