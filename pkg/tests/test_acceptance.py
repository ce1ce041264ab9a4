"""Acceptance suite: one test per release criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Tolerances are pinned here and nowhere else.
"""

import dataclasses
import random
import time
from datetime import datetime, timezone

from iotraq.assessment import compute_report
from iotraq.cli import main
from iotraq.documents import (
    assessment_to_doc,
    data_path,
    dumps,
    load_report,
    parse_assessment,
    report_to_doc,
    save_report,
)
from iotraq.pipeline import build_context
from iotraq.risk import PrevalencyScores, RiskScale, union_probability
from iotraq.sensitivity import WhatIfScenario, apply_what_if, sensitivity_analysis
from iotraq.synthetic import performance_case, synthetic_assessment, synthetic_taxonomy
from iotraq.taxonomy import VulnerabilityCategory

from .oracles import pipeline_reference, union_ie

UNION_TOLERANCE = 1e-12
PIPELINE_TOLERANCE = 1e-9
PARTITION_SLACK = 1e-9
UNION_BUDGET_S = 5.0
COMPUTE_BUDGET_S = 1.0
SENSITIVITY_BUDGET_S = 10.0


def _passed(label: str) -> None:
    print(f"ACCEPTANCE PASS: {label}")


def _random_case(rng: random.Random, scale: RiskScale | None = None):
    taxonomy = synthetic_taxonomy(
        rng,
        n_vulnerabilities=rng.randint(1, 5),
        n_controls=rng.randint(1, 6),
        n_actions=rng.randint(1, 4),
        n_assets=rng.randint(6, 12),
    )
    assessment = synthetic_assessment(rng, taxonomy, n_actors=rng.randint(1, 3), scale=scale)
    return taxonomy, assessment


def test_union_oracle():
    """Complement-product union matches the explicit inclusion-exclusion expansion."""
    rng = random.Random(1001)
    started = time.perf_counter()
    for _ in range(1000):
        size = rng.randint(0, 10)
        probabilities = [rng.random() for _ in range(size)]
        assert abs(union_probability(probabilities) - union_ie(probabilities)) <= UNION_TOLERANCE
    elapsed = time.perf_counter() - started
    assert elapsed < UNION_BUDGET_S, f"union oracle took {elapsed:.2f}s"
    _passed(f"union oracle, 1000 sets within {UNION_TOLERANCE:g} in {elapsed:.2f}s")


def test_pipeline_oracle():
    """Per-domain inherent/residual scores match a straight-line reimplementation."""
    rng = random.Random(2002)
    for _ in range(100):
        taxonomy, assessment = _random_case(rng)
        report = compute_report(taxonomy, assessment, include_sensitivity=False)
        reference = pipeline_reference(taxonomy, assessment)
        for d in report.domain_reports:
            expected = reference[d.risk_domain]
            assert abs(d.inherent_raw - expected["inherent_raw"]) <= PIPELINE_TOLERANCE
            assert abs(d.inherent_normalized - expected["inherent_normalized"]) <= PIPELINE_TOLERANCE
            assert abs(d.residual_raw - expected["residual_raw"]) <= PIPELINE_TOLERANCE
            assert abs(d.residual_normalized - expected["residual_normalized"]) <= PIPELINE_TOLERANCE
    _passed(f"pipeline oracle, 100 assessments within {PIPELINE_TOLERANCE:g}")


def _assert_residual_le_inherent(report):
    for d in report.domain_reports:
        assert d.residual_raw <= d.inherent_raw
        assert d.residual_normalized <= d.inherent_normalized


def test_monotonicity_suite():
    """Raising control scores never raises residual risk; raising actor capability never lowers likelihood."""
    rng = random.Random(3003)
    for _ in range(500):
        taxonomy, assessment = _random_case(rng)
        baseline_report = compute_report(taxonomy, assessment, include_sensitivity=False)
        baseline_L = build_context(taxonomy, assessment).likelihoods
        _assert_residual_le_inherent(baseline_report)

        # implementation and effectiveness: residual may only drop, likelihood untouched
        for field in ("implementation", "effectiveness"):
            control_id = rng.choice(sorted(taxonomy.control_by_id))
            scores = assessment.control_scores
            mapping = dict(getattr(scores, field))
            current = mapping.get(control_id, 0.0)
            mapping[control_id] = min(1.0, current + rng.uniform(0.05, 0.6))
            raised = dataclasses.replace(assessment, control_scores=dataclasses.replace(scores, **{field: mapping}))
            raised_report = compute_report(taxonomy, raised, include_sensitivity=False)
            for before, after in zip(baseline_report.domain_reports, raised_report.domain_reports):
                assert after.residual_normalized <= before.residual_normalized
                assert after.inherent_raw == before.inherent_raw
            _assert_residual_le_inherent(raised_report)

        # asset and action capability: likelihood may only grow
        actor_index = rng.randrange(len(assessment.threat_actors))
        for field, pool in (
            ("asset_likelihoods", sorted(taxonomy.asset_by_id)),
            ("action_likelihoods", sorted(taxonomy.action_by_id)),
        ):
            target = rng.choice(pool)
            actor = assessment.threat_actors[actor_index]
            mapping = dict(getattr(actor, field))
            current = mapping.get(target, 0.0)
            mapping[target] = min(1.0, current + rng.uniform(0.05, 0.6))
            raised_actor = dataclasses.replace(actor, **{field: mapping})
            actors = list(assessment.threat_actors)
            actors[actor_index] = raised_actor
            raised = dataclasses.replace(assessment, threat_actors=tuple(actors))
            raised_L = build_context(taxonomy, raised).likelihoods
            for vid, value in baseline_L.items():
                assert raised_L[vid] >= value
            _assert_residual_le_inherent(compute_report(taxonomy, raised, include_sensitivity=False))
    _passed("monotonicity suite, 500 assessments, 4 perturbations each")


def test_bounds_suite():
    """Normalized scores stay on the scale; domain partition caps the normalized sum."""
    rng = random.Random(4004)
    for _ in range(200):
        r_min = rng.uniform(-5.0, 5.0)
        scale = RiskScale(r_min=r_min, r_max=r_min + rng.uniform(1.0, 100.0))
        taxonomy, assessment = _random_case(rng, scale=scale)
        report = compute_report(taxonomy, assessment, include_sensitivity=False)
        span = scale.r_max - scale.r_min
        total = 0.0
        for d in report.domain_reports:
            for value in (d.inherent_normalized, d.residual_normalized):
                assert scale.r_min <= value <= scale.r_max
            total += d.inherent_normalized - scale.r_min
        assert total <= span + PARTITION_SLACK
    _passed("bounds suite, 200 assessments on random scales")


def test_ablation_zeroing_communications_prevalency(taxonomy, example_assessment):
    """Removing all communications vulnerabilities lowers only that domain's risk."""
    communications = [
        v.id for v in taxonomy.vulnerabilities if v.category is VulnerabilityCategory.COMMUNICATIONS
    ]
    assert communications
    scores = dict(example_assessment.prevalency.scores)
    for vid in communications:
        scores[vid] = 0.0
    ablated = dataclasses.replace(example_assessment, prevalency=PrevalencyScores(scores=scores))

    baseline = compute_report(taxonomy, example_assessment, include_sensitivity=False)
    after = compute_report(taxonomy, ablated, include_sensitivity=False)
    comm_domain = "domain.communications-security"
    base_by_domain = {d.risk_domain: d for d in baseline.domain_reports}
    for d in after.domain_reports:
        if d.risk_domain == comm_domain:
            assert d.inherent_normalized < base_by_domain[comm_domain].inherent_normalized
        else:
            assert d.inherent_raw == base_by_domain[d.risk_domain].inherent_raw
    _passed("ablation: zeroed communications prevalency lowers only communications security")


def test_top_ten_uplift_reduces_residual_everywhere_touched(taxonomy, example_assessment):
    """A +0.3 uplift of the ten highest-ranked controls lowers every domain they touch."""
    report = compute_report(taxonomy, example_assessment)
    top_ten = [s.control for s in report.sensitivity.overall[:10]]
    assert all(s.delta_residual_normalized > 0 for s in report.sensitivity.overall[:10])

    touched = {
        domain_id
        for domain_id, scores in report.sensitivity.per_domain.items()
        for s in scores
        if s.control in top_ten and s.delta_residual_normalized > 0
    }
    assert touched

    scenario = WhatIfScenario(uplifts={cid: 0.3 for cid in top_ten}, label="top ten uplift")
    what_if = apply_what_if(taxonomy, example_assessment, scenario)
    base_by_domain = {d.risk_domain: d for d in report.domain_reports}
    for d in what_if:
        baseline_residual = base_by_domain[d.risk_domain].residual_normalized
        assert d.residual_normalized <= baseline_residual
        if d.risk_domain in touched:
            assert d.residual_normalized < baseline_residual
    _passed(f"top-ten +0.3 uplift strictly reduces residual in all {len(touched)} touched domains")


def test_sensitivity_consistency(taxonomy, example_assessment):
    """Sensitivity scores equal baseline-minus-what-if exactly; saturated controls score zero."""
    report = compute_report(taxonomy, example_assessment)
    baseline = {d.risk_domain: d.residual_normalized for d in report.domain_reports}
    delta = example_assessment.sensitivity.delta
    by_control: dict[str, dict[str, float]] = {}
    for domain_id, scores in report.sensitivity.per_domain.items():
        for s in scores:
            by_control.setdefault(s.control, {})[domain_id] = s.delta_residual_normalized
            assert s.delta_residual_normalized >= 0.0

    for control_id in sorted(taxonomy.control_by_id):
        what_if = apply_what_if(taxonomy, example_assessment, WhatIfScenario(uplifts={control_id: delta}))
        for d in what_if:
            assert by_control[control_id][d.risk_domain] == baseline[d.risk_domain] - d.residual_normalized

    saturated = [
        cid for cid, value in example_assessment.control_scores.implementation.items() if value == 1.0
    ]
    assert saturated, "example assessment should include a fully implemented control"
    for cid in saturated:
        assert all(v == 0.0 for v in by_control[cid].values())
    _passed("sensitivity equals what-if difference exactly; saturated controls score zero")


def test_performance_desk_scale():
    """Full compute under one second; sensitivity over every control under ten."""
    taxonomy, assessment = performance_case()
    assert len(taxonomy.vulnerabilities) == 100
    assert len(taxonomy.controls) == 200
    assert len(taxonomy.actions) == 50
    assert len(assessment.threat_actors) == 5

    started = time.perf_counter()
    report = compute_report(taxonomy, assessment)
    compute_elapsed = time.perf_counter() - started
    assert len(report.domain_reports) == 9
    assert compute_elapsed < COMPUTE_BUDGET_S, f"full compute took {compute_elapsed:.3f}s"

    started = time.perf_counter()
    result = sensitivity_analysis(taxonomy, assessment)
    sensitivity_elapsed = time.perf_counter() - started
    assert len(result.overall) == 200
    assert sensitivity_elapsed < SENSITIVITY_BUDGET_S, f"sensitivity took {sensitivity_elapsed:.3f}s"
    _passed(
        f"performance: compute {compute_elapsed * 1000:.1f}ms, sensitivity {sensitivity_elapsed * 1000:.1f}ms"
    )


def test_round_trip_and_determinism(taxonomy, example_assessment, tmp_path, capsys, monkeypatch):
    """Save-load identity and byte-identical recomputation."""
    # bundle round trip
    assert parse_assessment(assessment_to_doc(example_assessment), taxonomy) == example_assessment

    # report round trip
    pinned = datetime(2026, 8, 9, tzinfo=timezone.utc)
    report = compute_report(taxonomy, example_assessment, generated_at=pinned)
    path = tmp_path / "report.json"
    save_report(report, path)
    assert load_report(path) == report

    # identical inputs, byte-identical serialized reports
    again = compute_report(taxonomy, example_assessment, generated_at=pinned)
    assert dumps(report_to_doc(report)) == dumps(report_to_doc(again))

    # CLI determinism: identical tables, and identical report files under a pinned clock
    example_path = str(data_path("example_assessment.json"))
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1786600800")
    out_a, out_b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["assess", example_path, "--out", str(out_a)]) == 0
    first = capsys.readouterr().out
    assert main(["assess", example_path, "--out", str(out_b)]) == 0
    second = capsys.readouterr().out
    assert first == second
    assert out_a.read_bytes() == out_b.read_bytes()
    _passed("round-trip identity and byte-identical recomputation")
