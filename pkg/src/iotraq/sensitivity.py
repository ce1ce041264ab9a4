"""One-at-a-time control sensitivity analysis and multi-control what-if scenarios.

The sensitivity score of a control for a domain is the drop in that domain's
normalized residual risk when the control's implementation score is raised by a
small increment (clamped at 1).  By construction a control's score equals the
difference between the baseline and a single-control what-if evaluation, bit for
bit, and can never be negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import UnknownIdError
from .maturity import ControlScores, maturity_score
from .pipeline import (
    AssessmentContext,
    build_context,
    domain_reports,
    maturities,
    residual_raw_by_domain,
)
from .risk import DomainRiskReport, normalize
from .taxonomy import TaxonomyBundle


@dataclass(frozen=True)
class SensitivityConfig:
    """Perturbation size and how many top controls the ranked views keep."""

    delta: float = 0.10
    top_n: int = 10

    def __post_init__(self) -> None:
        if not 0.0 < self.delta <= 1.0:
            raise ValueError(f"delta must be positive and at most 1, got {self.delta!r}")
        if self.top_n < 1:
            raise ValueError(f"top_n must be a positive integer, got {self.top_n!r}")


@dataclass(frozen=True)
class SensitivityScore:
    risk_domain: str
    control: str
    delta_residual_normalized: float


@dataclass(frozen=True)
class ControlSensitivity:
    """Aggregate sensitivity of one control: its per-domain deltas summed."""

    control: str
    delta_residual_normalized: float


@dataclass(frozen=True)
class SensitivityResult:
    config: SensitivityConfig
    per_domain: Mapping[str, tuple[SensitivityScore, ...]]
    overall: tuple[ControlSensitivity, ...]


@dataclass(frozen=True)
class WhatIfScenario:
    """Additive implementation-score uplifts per control; results are clamped to [0, 1]."""

    uplifts: Mapping[str, float]
    label: str = ""


def _uplifted_scores(scores: ControlScores, uplifts: Mapping[str, float]) -> ControlScores:
    implementation = dict(scores.implementation)
    for control_id, uplift in uplifts.items():
        current = implementation.get(control_id, 0.0)
        implementation[control_id] = min(1.0, max(0.0, current + uplift))
    return ControlScores(implementation=implementation, effectiveness=scores.effectiveness)


def _check_control_ids(taxonomy: TaxonomyBundle, control_ids) -> None:
    unknown = sorted(cid for cid in control_ids if cid not in taxonomy.control_by_id)
    if unknown:
        raise UnknownIdError(f"unknown control ids: {', '.join(unknown)}")


def apply_what_if_ctx(ctx: AssessmentContext, scenario: WhatIfScenario) -> list[DomainRiskReport]:
    """Evaluate a scenario against a prepared context without touching stored state."""
    _check_control_ids(ctx.taxonomy, scenario.uplifts)
    scores = _uplifted_scores(ctx.assessment.control_scores, scenario.uplifts)
    residual = residual_raw_by_domain(ctx, maturities(ctx, scores))
    return domain_reports(ctx, residual)


def apply_what_if(
    taxonomy: TaxonomyBundle,
    assessment: "AssessmentBundle",
    scenario: WhatIfScenario,
) -> list[DomainRiskReport]:
    """Full per-domain reports under uplifted control scores.

    Inherent values are unchanged by construction; residual values are
    recomputed.  The stored assessment is never mutated.
    """
    return apply_what_if_ctx(build_context(taxonomy, assessment), scenario)


def sensitivity_analysis_ctx(ctx: AssessmentContext, config: SensitivityConfig | None = None) -> SensitivityResult:
    if config is None:
        config = ctx.assessment.sensitivity
    taxonomy = ctx.taxonomy
    scores = ctx.assessment.control_scores

    base_maturity = maturities(ctx, scores)
    base_residual = residual_raw_by_domain(ctx, base_maturity)
    base_normalized = {
        d: normalize(base_residual[d], ctx.denominator, ctx.scale) for d in taxonomy.domain_order
    }

    deltas: dict[str, dict[str, float]] = {d: {} for d in taxonomy.domain_order}
    for control_id in sorted(taxonomy.control_by_id):
        touched = ctx.domains_by_control.get(control_id, ())
        current = scores.implementation.get(control_id, 0.0)
        uplifted = min(1.0, current + config.delta)
        if not touched or uplifted == current:
            for domain_id in taxonomy.domain_order:
                deltas[domain_id][control_id] = 0.0
            continue
        perturbed = _uplifted_scores(scores, {control_id: config.delta})
        perturbed_maturity = dict(base_maturity)
        for vid in ctx.vulnerabilities_by_control.get(control_id, ()):
            perturbed_maturity[vid] = maturity_score(vid, perturbed, taxonomy, ctx.audiences).maturity
        prevalency = ctx.assessment.prevalency.scores
        for domain_id in taxonomy.domain_order:
            if domain_id not in touched:
                deltas[domain_id][control_id] = 0.0
                continue
            total = 0.0
            for vid in taxonomy.vulnerabilities_by_domain.get(domain_id, ()):
                total += (
                    prevalency.get(vid, 0.0)
                    * ctx.likelihoods[vid]
                    * ctx.impacts[vid]
                    * (1.0 - perturbed_maturity[vid])
                )
            deltas[domain_id][control_id] = base_normalized[domain_id] - normalize(
                total, ctx.denominator, ctx.scale
            )

    per_domain: dict[str, tuple[SensitivityScore, ...]] = {}
    for domain_id in taxonomy.domain_order:
        ranked = sorted(
            (
                SensitivityScore(
                    risk_domain=domain_id,
                    control=control_id,
                    delta_residual_normalized=value,
                )
                for control_id, value in deltas[domain_id].items()
            ),
            key=lambda s: (-s.delta_residual_normalized, s.control),
        )
        per_domain[domain_id] = tuple(ranked)

    totals: dict[str, float] = {}
    for control_id in sorted(taxonomy.control_by_id):
        total = 0.0
        for domain_id in taxonomy.domain_order:
            total += deltas[domain_id][control_id]
        totals[control_id] = total
    overall = tuple(
        sorted(
            (ControlSensitivity(control=cid, delta_residual_normalized=v) for cid, v in totals.items()),
            key=lambda s: (-s.delta_residual_normalized, s.control),
        )
    )

    return SensitivityResult(config=config, per_domain=per_domain, overall=overall)


def sensitivity_analysis(
    taxonomy: TaxonomyBundle,
    assessment: "AssessmentBundle",
    config: SensitivityConfig | None = None,
) -> SensitivityResult:
    """Rank every control by how much raising its implementation reduces residual risk.

    Produces one ranked list per domain plus an aggregate ranking summing each
    control's deltas across domains.  Ties break lexicographically by control id,
    so output is stable across runs.
    """
    return sensitivity_analysis_ctx(build_context(taxonomy, assessment), config)
