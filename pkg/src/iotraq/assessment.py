"""Assessment bundles (one organization's full input) and computed reports."""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import ValidationIssue
from .maturity import ControlScores
from .pipeline import build_context, domain_reports, maturities, residual_raw_by_domain, risk_points
from .risk import (
    DomainRiskReport,
    ImpactWeights,
    PrevalencyScores,
    RiskScale,
    ThreatActorProfile,
    VulnerabilityRiskPoint,
)
from .sensitivity import SensitivityConfig, SensitivityResult, sensitivity_analysis_ctx
from .taxonomy import Audience, TaxonomyBundle

_ID_PATTERN = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


@dataclass(frozen=True)
class Organization:
    name: str
    roles: tuple[Audience, ...]


@dataclass(frozen=True)
class AssessmentBundle:
    """Everything the compute pipeline needs for one organization."""

    id: str
    organization: Organization
    taxonomy_ref: str
    threat_actors: tuple[ThreatActorProfile, ...]
    prevalency: PrevalencyScores
    impacts: ImpactWeights
    control_scores: ControlScores
    scale: RiskScale = RiskScale(r_min=0.0, r_max=100.0)
    sensitivity: SensitivityConfig = field(default_factory=SensitivityConfig)


@dataclass(frozen=True)
class AssessmentReport:
    """Computed output for one assessment: domain risks, risk matrix, sensitivity rankings."""

    assessment_id: str
    generated_at: datetime
    taxonomy_version: str
    domain_reports: tuple[DomainRiskReport, ...]
    risk_matrix: tuple[VulnerabilityRiskPoint, ...]
    sensitivity: SensitivityResult


def _check_probability_map(
    issues: list[ValidationIssue],
    path: str,
    mapping,
    known_ids,
    kind: str,
) -> None:
    for key in sorted(mapping):
        value = mapping[key]
        if key not in known_ids:
            issues.append(ValidationIssue(f"{path}[{key}]", f"unknown {kind} id"))
        if not isinstance(value, (int, float)) or isinstance(value, bool) or not 0.0 <= value <= 1.0:
            issues.append(ValidationIssue(f"{path}[{key}]", f"probability {value!r} out of range [0, 1]"))


def validate_assessment(bundle: AssessmentBundle, taxonomy: TaxonomyBundle) -> list[ValidationIssue]:
    """Exhaustively check an assessment against its taxonomy.

    Returns every problem found (ranges, dangling references, missing sections);
    an empty list means the bundle is safe to compute.
    """
    issues: list[ValidationIssue] = []

    if not isinstance(bundle.id, str) or not _ID_PATTERN.match(bundle.id):
        issues.append(ValidationIssue("id", f"{bundle.id!r} is not a safe identifier"))

    if not bundle.organization.name:
        issues.append(ValidationIssue("organization.name", "must not be empty"))
    roles = list(bundle.organization.roles)
    if not roles:
        issues.append(ValidationIssue("organization.roles", "at least one role (producer/consumer) is required"))
    seen_roles = set()
    for index, role in enumerate(roles):
        try:
            role = Audience(role)
        except ValueError:
            issues.append(ValidationIssue(f"organization.roles[{index}]", f"{role!r} is not producer or consumer"))
            continue
        if role in seen_roles:
            issues.append(ValidationIssue(f"organization.roles[{index}]", f"duplicate role {role.value!r}"))
        seen_roles.add(role)

    if bundle.taxonomy_ref != taxonomy.version:
        issues.append(
            ValidationIssue(
                "taxonomy_ref",
                f"references taxonomy version {bundle.taxonomy_ref!r} but {taxonomy.version!r} is loaded",
            )
        )

    if not bundle.threat_actors:
        issues.append(ValidationIssue("threat_actors", "at least one threat actor is required"))
    actor_ids = set()
    for index, actor in enumerate(bundle.threat_actors):
        prefix = f"threat_actors[{index}]"
        if actor.id in actor_ids:
            issues.append(ValidationIssue(prefix + ".id", f"duplicate threat actor id {actor.id!r}"))
        actor_ids.add(actor.id)
        _check_probability_map(issues, prefix + ".asset_likelihoods", actor.asset_likelihoods, taxonomy.asset_by_id, "asset")
        _check_probability_map(issues, prefix + ".action_likelihoods", actor.action_likelihoods, taxonomy.action_by_id, "action")

    _check_probability_map(issues, "prevalency.scores", bundle.prevalency.scores, taxonomy.vulnerability_by_id, "vulnerability")

    weights = bundle.impacts
    if not isinstance(weights.max_weight, (int, float)) or isinstance(weights.max_weight, bool) or weights.max_weight <= 0:
        issues.append(ValidationIssue("impacts.max_weight", f"must be a positive number, got {weights.max_weight!r}"))
    for pid in sorted(weights.weights):
        value = weights.weights[pid]
        if pid not in taxonomy.property_by_id:
            issues.append(ValidationIssue(f"impacts.weights[{pid}]", "unknown property id"))
        if not isinstance(value, (int, float)) or isinstance(value, bool) or value < 0:
            issues.append(ValidationIssue(f"impacts.weights[{pid}]", f"weight {value!r} must be a nonnegative number"))
        elif isinstance(weights.max_weight, (int, float)) and not isinstance(weights.max_weight, bool) and weights.max_weight > 0 and value > weights.max_weight:
            issues.append(ValidationIssue(f"impacts.weights[{pid}]", f"weight {value!r} exceeds max_weight {weights.max_weight!r}"))
    for pid in sorted(taxonomy.property_by_id):
        if pid not in weights.weights:
            issues.append(ValidationIssue("impacts.weights", f"missing weight for property {pid!r}; impacts must be fully elicited"))

    _check_probability_map(issues, "control_scores.implementation", bundle.control_scores.implementation, taxonomy.control_by_id, "control")
    _check_probability_map(issues, "control_scores.effectiveness", bundle.control_scores.effectiveness, taxonomy.control_by_id, "control")

    if not bundle.scale.r_max > bundle.scale.r_min:
        issues.append(ValidationIssue("scale", f"r_max {bundle.scale.r_max!r} must exceed r_min {bundle.scale.r_min!r}"))

    return issues


def default_generated_at() -> datetime:
    """Current UTC time, or the pinned instant from SOURCE_DATE_EPOCH when set.

    Honoring SOURCE_DATE_EPOCH makes report files reproducible byte for byte.
    """
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is not None:
        return datetime.fromtimestamp(int(epoch), tz=timezone.utc)
    return datetime.now(tz=timezone.utc)


def compute_report(
    taxonomy: TaxonomyBundle,
    assessment: AssessmentBundle,
    *,
    generated_at: datetime | None = None,
    include_sensitivity: bool = True,
) -> AssessmentReport:
    """Run the full pipeline: domain risks, the risk matrix, and sensitivity rankings.

    Deterministic given its inputs; ``generated_at`` defaults to the current UTC
    time (or SOURCE_DATE_EPOCH when set) and is the only non-derived field.
    """
    ctx = build_context(taxonomy, assessment)
    residual = residual_raw_by_domain(ctx, maturities(ctx, assessment.control_scores))
    reports = domain_reports(ctx, residual)
    if include_sensitivity:
        sensitivity = sensitivity_analysis_ctx(ctx, assessment.sensitivity)
    else:
        sensitivity = SensitivityResult(config=assessment.sensitivity, per_domain={}, overall=())
    return AssessmentReport(
        assessment_id=assessment.id,
        generated_at=generated_at if generated_at is not None else default_generated_at(),
        taxonomy_version=taxonomy.version,
        domain_reports=tuple(reports),
        risk_matrix=tuple(risk_points(ctx)),
        sensitivity=sensitivity,
    )
