"""Prepared per-assessment computation state shared by reports, what-if, and sensitivity.

Likelihoods and impacts depend only on the taxonomy, the selected threat actors,
and the elicited weights, so they are computed once per assessment and reused
across every control perturbation.  All iteration follows canonical (sorted)
orders, which makes results deterministic and lets a perturbed recomputation
reproduce, bit for bit, what a from-scratch evaluation would produce for the
untouched parts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping

from .maturity import ControlScores, maturity_score
from .risk import (
    DomainRiskReport,
    RiskScale,
    VulnerabilityRiskPoint,
    normalize,
    risk_matrix,
    vulnerability_impact,
    vulnerability_impact_ceiling,
    vulnerability_likelihood,
)
from .taxonomy import Audience, TaxonomyBundle

if TYPE_CHECKING:  # pragma: no cover - import cycle guard for annotations only
    from .assessment import AssessmentBundle


@dataclass
class AssessmentContext:
    """Everything the residual-risk computations need, precomputed once."""

    taxonomy: TaxonomyBundle
    assessment: "AssessmentBundle"
    audiences: frozenset[Audience]
    likelihoods: dict[str, float]
    impacts: dict[str, float]
    denominator: float
    inherent_raw: dict[str, float]
    controls_by_vulnerability: dict[str, tuple[str, ...]]
    vulnerabilities_by_control: dict[str, tuple[str, ...]]
    domains_by_control: dict[str, tuple[str, ...]]

    @property
    def scale(self) -> RiskScale:
        return self.assessment.scale


def build_context(taxonomy: TaxonomyBundle, assessment: "AssessmentBundle") -> AssessmentContext:
    actors = sorted(assessment.threat_actors, key=lambda a: a.id)
    prevalency = assessment.prevalency
    weights = assessment.impacts
    audiences = frozenset(Audience(r) for r in assessment.organization.roles)

    likelihoods: dict[str, float] = {}
    impacts: dict[str, float] = {}
    denominator = 0.0
    for vid in sorted(taxonomy.vulnerability_by_id):
        likelihoods[vid] = vulnerability_likelihood(vid, actors, taxonomy)
        impacts[vid] = vulnerability_impact(vid, weights, taxonomy)
        denominator += prevalency.scores.get(vid, 0.0) * vulnerability_impact_ceiling(vid, weights, taxonomy)

    inherent_raw: dict[str, float] = {}
    for domain_id in taxonomy.domain_order:
        total = 0.0
        for vid in taxonomy.vulnerabilities_by_domain.get(domain_id, ()):
            total += prevalency.scores.get(vid, 0.0) * likelihoods[vid] * impacts[vid]
        inherent_raw[domain_id] = total

    controls_by_vulnerability: dict[str, tuple[str, ...]] = {}
    vulnerabilities_by_control: dict[str, list[str]] = {c.id: [] for c in taxonomy.controls}
    for vid in sorted(taxonomy.vulnerability_by_id):
        applicable = tuple(
            cid
            for cid in taxonomy.controls_for_vulnerability.get(vid, ())
            if taxonomy.control_by_id[cid].audience in audiences
        )
        controls_by_vulnerability[vid] = applicable
        for cid in applicable:
            vulnerabilities_by_control[cid].append(vid)

    domains_by_control: dict[str, tuple[str, ...]] = {}
    vuln_domain = {v.id: v.risk_domain for v in taxonomy.vulnerabilities}
    for cid, vids in vulnerabilities_by_control.items():
        touched = {vuln_domain[vid] for vid in vids if vuln_domain.get(vid) is not None}
        domains_by_control[cid] = tuple(d for d in taxonomy.domain_order if d in touched)

    return AssessmentContext(
        taxonomy=taxonomy,
        assessment=assessment,
        audiences=audiences,
        likelihoods=likelihoods,
        impacts=impacts,
        denominator=denominator,
        inherent_raw=inherent_raw,
        controls_by_vulnerability=controls_by_vulnerability,
        vulnerabilities_by_control={cid: tuple(v) for cid, v in vulnerabilities_by_control.items()},
        domains_by_control=domains_by_control,
    )


def maturities(ctx: AssessmentContext, scores: ControlScores) -> dict[str, float]:
    """Maturity score per vulnerability under the given control scores."""
    return {
        vid: maturity_score(vid, scores, ctx.taxonomy, ctx.audiences).maturity
        for vid in sorted(ctx.taxonomy.vulnerability_by_id)
    }


def residual_raw_by_domain(ctx: AssessmentContext, maturity_by_vulnerability: Mapping[str, float]) -> dict[str, float]:
    """Raw residual risk per domain from precomputed likelihood, impact, and maturity."""
    prevalency = ctx.assessment.prevalency.scores
    out: dict[str, float] = {}
    for domain_id in ctx.taxonomy.domain_order:
        total = 0.0
        for vid in ctx.taxonomy.vulnerabilities_by_domain.get(domain_id, ()):
            total += (
                prevalency.get(vid, 0.0)
                * ctx.likelihoods[vid]
                * ctx.impacts[vid]
                * (1.0 - maturity_by_vulnerability[vid])
            )
        out[domain_id] = total
    return out


def domain_reports(ctx: AssessmentContext, residual_raw: Mapping[str, float]) -> list[DomainRiskReport]:
    """One report per risk domain, in the taxonomy's canonical domain order."""
    reports = []
    for domain_id in ctx.taxonomy.domain_order:
        inherent = ctx.inherent_raw[domain_id]
        residual = residual_raw[domain_id]
        reports.append(
            DomainRiskReport(
                risk_domain=domain_id,
                inherent_raw=inherent,
                inherent_normalized=normalize(inherent, ctx.denominator, ctx.scale),
                residual_raw=residual,
                residual_normalized=normalize(residual, ctx.denominator, ctx.scale),
            )
        )
    return reports


def risk_points(ctx: AssessmentContext) -> list[VulnerabilityRiskPoint]:
    return risk_matrix(ctx.assessment.prevalency, ctx.likelihoods, ctx.impacts)
