"""Control mitigation, per-vulnerability maturity scores, and per-domain residual risk.

A control's mitigation is how well it is implemented times how effective it is.
A vulnerability's maturity score is the probability that at least one of its
(independently acting) controls mitigates it; residual risk scales each
vulnerability's inherent contribution by the unmitigated share ``1 - M``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Collection, Iterable, Mapping

from .errors import ProbabilityRangeError, UnknownIdError
from .risk import (
    ImpactWeights,
    PrevalencyScores,
    ThreatActorProfile,
    union_probability,
    vulnerability_impact,
    vulnerability_likelihood,
)
from .taxonomy import Audience, TaxonomyBundle

# Questionnaire answers map onto this fixed five-level implementation ladder so
# that scores stay comparable across assessments.
IMPLEMENTATION_LADDER: tuple[float, ...] = (0.0, 0.25, 0.5, 0.75, 1.0)


def implementation_from_level(level: int) -> float:
    """Implementation score for a questionnaire answer level (0 through 4)."""
    if not 0 <= level < len(IMPLEMENTATION_LADDER):
        raise ValueError(f"questionnaire level must be 0..{len(IMPLEMENTATION_LADDER) - 1}, got {level!r}")
    return IMPLEMENTATION_LADDER[level]


@dataclass(frozen=True)
class ControlScores:
    """Implementation and effectiveness probabilities per control id.

    Unscored controls default to 0 in both maps: a control nobody has assessed
    mitigates nothing.
    """

    implementation: Mapping[str, float]
    effectiveness: Mapping[str, float]


@dataclass(frozen=True)
class MaturityResult:
    vulnerability: str
    maturity: float


def mitigation(control_id: str, scores: ControlScores) -> float:
    """How well one control mitigates risk: implementation times effectiveness."""
    implementation = scores.implementation.get(control_id, 0.0)
    effectiveness = scores.effectiveness.get(control_id, 0.0)
    for name, value in (("implementation", implementation), ("effectiveness", effectiveness)):
        if not 0.0 <= value <= 1.0:
            raise ProbabilityRangeError(f"{name} score of {control_id!r} is {value!r}, expected a value in [0, 1]")
    return implementation * effectiveness


def maturity_score(
    vulnerability_id: str,
    scores: ControlScores,
    bundle: TaxonomyBundle,
    audiences: Collection[Audience | str],
) -> MaturityResult:
    """Probability at least one selected-audience control mitigates the vulnerability.

    ``audiences`` restricts the control set to the organization's roles; a
    vulnerability with no applicable controls is fully unmitigated (score 0).
    The result does not depend on control ordering.
    """
    if vulnerability_id not in bundle.vulnerability_by_id:
        raise UnknownIdError(f"unknown vulnerability id {vulnerability_id!r}")
    selected = {Audience(a) for a in audiences}
    control_ids = [
        cid
        for cid in bundle.controls_for_vulnerability.get(vulnerability_id, ())
        if bundle.control_by_id[cid].audience in selected
    ]
    value = union_probability(mitigation(cid, scores) for cid in control_ids)
    return MaturityResult(vulnerability=vulnerability_id, maturity=value)


def residual_risk(
    domain_id: str,
    bundle: TaxonomyBundle,
    actors: Iterable[ThreatActorProfile],
    prevalency: PrevalencyScores,
    weights: ImpactWeights,
    scores: ControlScores,
    audiences: Collection[Audience | str],
) -> float:
    """Risk remaining in one domain after controls: inherent terms scaled by ``1 - M``."""
    if domain_id not in bundle.domain_by_id:
        raise UnknownIdError(f"unknown risk domain id {domain_id!r}")
    ordered_actors = sorted(actors, key=lambda a: a.id)
    total = 0.0
    for vid in bundle.vulnerabilities_by_domain.get(domain_id, ()):
        p = prevalency.scores.get(vid, 0.0)
        likelihood = vulnerability_likelihood(vid, ordered_actors, bundle)
        impact = vulnerability_impact(vid, weights, bundle)
        unmitigated = 1.0 - maturity_score(vid, scores, bundle, audiences).maturity
        total += p * likelihood * impact * unmitigated
    return total
