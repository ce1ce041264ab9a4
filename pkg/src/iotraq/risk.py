"""Per-vulnerability likelihood and impact, and per-domain inherent risk.

Likelihood composes three layers of "probability that at least one of several
independent events occurs": assets within a sub-dimension, actions able to
exploit a vulnerability, and threat actors able to attempt it.  Under the
independence assumption the inclusion-exclusion expansion collapses to the
complement product ``1 - prod(1 - p_i)``, which is what :func:`union_probability`
computes; the literal expansion is exponential in the event count and is kept
only as a test oracle.

All functions are pure and safe to evaluate concurrently.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import (
    IncompleteAssessmentError,
    DegenerateAssessmentError,
    NoExploitPathWarning,
    ProbabilityRangeError,
    UnknownIdError,
)
from .taxonomy import SubDimension, ActionAssetRequirement, TaxonomyBundle


@dataclass(frozen=True)
class ThreatActorProfile:
    """A named adversary class with per-asset and per-action capability probabilities.

    Missing entries mean the actor lacks that asset or never takes that action
    (probability zero).
    """

    id: str
    label: str
    asset_likelihoods: Mapping[str, float]
    action_likelihoods: Mapping[str, float]


@dataclass(frozen=True)
class ImpactWeights:
    """Monetary-scale loss per compromised property, with a shared per-property ceiling."""

    weights: Mapping[str, float]
    max_weight: float


@dataclass(frozen=True)
class PrevalencyScores:
    """Probability that each vulnerability is present in the organization's estate.

    Missing entries mean the vulnerability is absent (prevalency zero).
    """

    scores: Mapping[str, float]


@dataclass(frozen=True)
class RiskScale:
    """Closed interval onto which normalized risk scores are mapped."""

    r_min: float
    r_max: float


@dataclass(frozen=True)
class VulnerabilityRiskPoint:
    vulnerability: str
    likelihood: float
    impact: float


@dataclass(frozen=True)
class DomainRiskReport:
    risk_domain: str
    inherent_raw: float
    inherent_normalized: float
    residual_raw: float
    residual_normalized: float


def union_probability(probabilities: Iterable[float]) -> float:
    """Probability that at least one of several independent events occurs.

    Equals the inclusion-exclusion expansion exactly (under independence) but
    runs in linear time via the complement product.  The union of no events is 0.
    """
    complement = 1.0
    for index, p in enumerate(probabilities):
        if not 0.0 <= p <= 1.0:
            raise ProbabilityRangeError(f"probability at index {index} is {p!r}, expected a value in [0, 1]")
        complement *= 1.0 - p
    return 1.0 - complement


def asset_subdimension_likelihood(
    requirement: ActionAssetRequirement | None,
    sub_dimension: SubDimension,
    actor: ThreatActorProfile,
) -> float:
    """Probability the actor holds at least one usable asset in one sub-dimension.

    A sub-dimension the requirement does not mention is vacuous: the action needs
    nothing from it and the factor is 1.
    """
    if requirement is None:
        return 1.0
    asset_ids = requirement.required_assets.get(SubDimension(sub_dimension))
    if not asset_ids:
        return 1.0
    return union_probability(actor.asset_likelihoods.get(aid, 0.0) for aid in sorted(asset_ids))


def action_asset_likelihood(action_id: str, actor: ThreatActorProfile, bundle: TaxonomyBundle) -> float:
    """Probability the actor holds a full asset vector for the action.

    Product over the six sub-dimensions of the per-sub-dimension union; an action
    with no requirement entry at all needs no assets and gets probability 1.
    """
    if action_id not in bundle.action_by_id:
        raise UnknownIdError(f"unknown action id {action_id!r}")
    requirement = bundle.requirement_by_action.get(action_id)
    result = 1.0
    for sub_dimension in SubDimension:
        result *= asset_subdimension_likelihood(requirement, sub_dimension, actor)
    return result


def vulnerability_actor_likelihood(
    vulnerability_id: str,
    actor: ThreatActorProfile,
    bundle: TaxonomyBundle,
) -> float:
    """Probability one actor exploits the vulnerability through any mapped action.

    Each event is "actor takes the action and holds its asset vector"; the result
    is the union over the vulnerability's exploiting actions.  A vulnerability
    with no mapped actions cannot be exploited: the result is 0 and a
    :class:`NoExploitPathWarning` is emitted.
    """
    if vulnerability_id not in bundle.vulnerability_by_id:
        raise UnknownIdError(f"unknown vulnerability id {vulnerability_id!r}")
    action_ids = bundle.actions_for_vulnerability.get(vulnerability_id, ())
    if not action_ids:
        warnings.warn(
            NoExploitPathWarning(f"vulnerability {vulnerability_id!r} has no exploiting actions mapped; likelihood is 0"),
            stacklevel=2,
        )
        return 0.0
    events = (
        actor.action_likelihoods.get(aid, 0.0) * action_asset_likelihood(aid, actor, bundle)
        for aid in action_ids
    )
    return union_probability(events)


def vulnerability_likelihood(
    vulnerability_id: str,
    actors: Iterable[ThreatActorProfile],
    bundle: TaxonomyBundle,
) -> float:
    """Probability at least one selected threat actor exploits the vulnerability."""
    ordered = sorted(actors, key=lambda a: a.id)
    if not ordered:
        raise IncompleteAssessmentError("threat_actors: an assessment must select at least one threat actor")
    return union_probability(
        vulnerability_actor_likelihood(vulnerability_id, actor, bundle) for actor in ordered
    )


def vulnerability_impact(vulnerability_id: str, weights: ImpactWeights, bundle: TaxonomyBundle) -> float:
    """Total loss if the vulnerability is exploited: sum of its compromised-property weights."""
    if vulnerability_id not in bundle.vulnerability_by_id:
        raise UnknownIdError(f"unknown vulnerability id {vulnerability_id!r}")
    total = 0.0
    for pid in bundle.properties_for_vulnerability.get(vulnerability_id, ()):
        if pid not in weights.weights:
            raise IncompleteAssessmentError(
                f"impacts: no weight elicited for property {pid!r} compromised by {vulnerability_id!r}"
            )
        total += weights.weights[pid]
    return total


def vulnerability_impact_ceiling(vulnerability_id: str, weights: ImpactWeights, bundle: TaxonomyBundle) -> float:
    """Largest impact the vulnerability could have: property count times the weight ceiling."""
    if vulnerability_id not in bundle.vulnerability_by_id:
        raise UnknownIdError(f"unknown vulnerability id {vulnerability_id!r}")
    return len(bundle.properties_for_vulnerability.get(vulnerability_id, ())) * weights.max_weight


def inherent_risk(
    domain_id: str,
    bundle: TaxonomyBundle,
    actors: Iterable[ThreatActorProfile],
    prevalency: PrevalencyScores,
    weights: ImpactWeights,
) -> float:
    """Untreated risk in one domain: prevalency-weighted sum of likelihood times impact."""
    if domain_id not in bundle.domain_by_id:
        raise UnknownIdError(f"unknown risk domain id {domain_id!r}")
    ordered_actors = sorted(actors, key=lambda a: a.id)
    total = 0.0
    for vid in bundle.vulnerabilities_by_domain.get(domain_id, ()):
        p = prevalency.scores.get(vid, 0.0)
        if not 0.0 <= p <= 1.0:
            raise ProbabilityRangeError(f"prevalency of {vid!r} is {p!r}, expected a value in [0, 1]")
        likelihood = vulnerability_likelihood(vid, ordered_actors, bundle)
        impact = vulnerability_impact(vid, weights, bundle)
        total += p * likelihood * impact
    return total


def normalization_denominator(
    bundle: TaxonomyBundle,
    prevalency: PrevalencyScores,
    weights: ImpactWeights,
) -> float:
    """Maximum possible risk over all vulnerabilities: sum of prevalency times impact ceiling."""
    total = 0.0
    for vid in sorted(bundle.vulnerability_by_id):
        total += prevalency.scores.get(vid, 0.0) * vulnerability_impact_ceiling(vid, weights, bundle)
    return total


def normalize(raw: float, denominator: float, scale: RiskScale) -> float:
    """Map a raw risk score onto the configured scale by its maximum possible value.

    The result is clamped into ``[r_min, r_max]`` so rounding at the extremes can
    never leave the scale.
    """
    if denominator <= 0.0:
        raise DegenerateAssessmentError(
            "degenerate assessment: nothing is at risk (all prevalencies or all impact ceilings are zero)"
        )
    value = raw * (scale.r_max - scale.r_min) / denominator + scale.r_min
    return min(max(value, scale.r_min), scale.r_max)


def risk_matrix(
    prevalency: PrevalencyScores,
    likelihoods: Mapping[str, float],
    impacts: Mapping[str, float],
) -> list[VulnerabilityRiskPoint]:
    """Scatter points (likelihood, impact) for every vulnerability present in the estate.

    Zero-prevalency vulnerabilities are excluded; points are ordered by
    decreasing likelihood-times-impact, ties broken by vulnerability id.
    """
    points = [
        VulnerabilityRiskPoint(vulnerability=vid, likelihood=likelihoods[vid], impact=impacts[vid])
        for vid in sorted(likelihoods)
        if prevalency.scores.get(vid, 0.0) > 0.0
    ]
    points.sort(key=lambda pt: (-(pt.likelihood * pt.impact), pt.vulnerability))
    return points
