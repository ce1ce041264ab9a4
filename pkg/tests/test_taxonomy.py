import dataclasses

import pytest

from iotraq.taxonomy import (
    AttackStep,
    Audience,
    IncidentChain,
    SubDimension,
    VulnerabilityCategory,
    lint_taxonomy,
    query_taxonomy,
    validate_incident_chain,
    validate_taxonomy,
)

from .builders import DOMAIN_IDS, action, control, make_taxonomy, vulnerability


class TestValidateTaxonomy:
    def test_default_bundle_is_clean(self, taxonomy):
        report = validate_taxonomy(taxonomy)
        assert report.ok, str(report)

    def test_default_bundle_has_no_orphans(self, taxonomy):
        report = lint_taxonomy(taxonomy)
        assert report.ok, str(report)

    def test_validation_is_idempotent(self, taxonomy):
        assert validate_taxonomy(taxonomy) == validate_taxonomy(taxonomy)

    def test_domains_partition_the_vulnerability_dimension(self, taxonomy):
        seen: list[str] = []
        for domain_id in taxonomy.domain_order:
            seen.extend(taxonomy.vulnerabilities_by_domain[domain_id])
        assert sorted(seen) == sorted(v.id for v in taxonomy.vulnerabilities)
        assert len(seen) == len(set(seen))

    def test_unassigned_risk_domain_is_reported(self):
        tax = make_taxonomy(vulnerabilities=[vulnerability("vuln.lost", None)])  # type: ignore[arg-type]
        report = validate_taxonomy(tax)
        assert [v.rule for v in report.violations] == ["unassigned risk domain"]
        assert report.violations[0].element_id == "vuln.lost"

    def test_dangling_control_reference_is_reported(self):
        tax = make_taxonomy(
            vulnerabilities=[vulnerability("vuln.real", DOMAIN_IDS["encryption"])],
            controls=[control("ctrl.bad", DOMAIN_IDS["encryption"], ["vuln.ghost"])],
            vuln_actions={},
            vuln_properties={},
        )
        report = validate_taxonomy(tax)
        rules = {(v.element_id, v.rule) for v in report.violations}
        assert ("ctrl.bad", "dangling reference") in rules

    def test_every_violation_is_reported_not_only_the_first(self):
        tax = make_taxonomy(
            vulnerabilities=[
                vulnerability("vuln.lost", None),  # type: ignore[arg-type]
                vulnerability("vuln.dup", DOMAIN_IDS["encryption"]),
                vulnerability("vuln.dup", DOMAIN_IDS["encryption"]),
            ],
            controls=[control("ctrl.bad", DOMAIN_IDS["encryption"], [])],
        )
        report = validate_taxonomy(tax)
        rules = {v.rule for v in report.violations}
        assert {"unassigned risk domain", "duplicate id", "control mitigates nothing"} <= rules

    def test_duplicate_id_across_dimensions_is_mutual_exclusion_violation(self):
        tax = make_taxonomy(
            actions=[action("shared.id")],
            vulnerabilities=[vulnerability("shared.id", DOMAIN_IDS["encryption"])],
            vuln_actions={"shared.id": ["shared.id"]},
            vuln_properties={"shared.id": ["prop.integrity"]},
        )
        report = validate_taxonomy(tax)
        assert any(v.rule == "duplicate id" for v in report.violations)

    def test_missing_domain_set_is_reported(self, taxonomy):
        tax = dataclasses.replace(make_taxonomy(), risk_domains=make_taxonomy().risk_domains[:8])
        report = validate_taxonomy(tax)
        assert any(v.rule == "incomplete domain set" for v in report.violations)

    def test_pattern_unique_within_category(self):
        tax = make_taxonomy(actions=[action("act.a", pattern="same"), action("act.b", pattern="same")])
        report = validate_taxonomy(tax)
        assert any(v.rule == "duplicate pattern" for v in report.violations)


MIRAI_STEP_ONE = AttackStep(
    assets={
        SubDimension.PRIOR_INFORMATION: "asset.prior.target-device-address",
        SubDimension.LOCATION_ACCESS: "asset.location.remote",
        SubDimension.EQUIPMENT: "asset.equipment.commercial-pc",
        SubDimension.TECHNICAL_SKILLS: "asset.skills.general",
    },
    action="action.resource.install-worm",
    vulnerability="vuln.software.default-password",
    properties=frozenset({"prop.authorization"}),
    carried_forward=frozenset({"asset.equipment.compromised-device-fleet"}),
)
MIRAI_STEP_TWO = AttackStep(
    assets={
        SubDimension.LOCATION_ACCESS: "asset.location.remote",
        SubDimension.EQUIPMENT: "asset.equipment.compromised-device-fleet",
        SubDimension.TECHNICAL_SKILLS: "asset.skills.basic",
    },
    action="action.abuse.traffic-flooding",
    vulnerability="vuln.communications.traffic-obstruction",
    properties=frozenset({"prop.availability"}),
)


class TestIncidentChains:
    def test_botnet_style_chain_is_valid(self, taxonomy):
        chain = IncidentChain(name="webcam-botnet", steps=(MIRAI_STEP_ONE, MIRAI_STEP_TWO))
        report = validate_incident_chain(taxonomy, chain)
        assert report.ok, str(report)

    def test_action_that_cannot_exploit_the_vulnerability(self, taxonomy):
        bad = dataclasses.replace(MIRAI_STEP_ONE, action="action.collect.tag-tracking")
        report = validate_incident_chain(taxonomy, IncidentChain(name="bad", steps=(bad,)))
        assert [v.rule for v in report.violations] == ["action cannot exploit vulnerability"]

    def test_empty_chain(self, taxonomy):
        report = validate_incident_chain(taxonomy, IncidentChain(name="empty", steps=()))
        assert [v.rule for v in report.violations] == ["empty chain"]

    def test_unknown_ids_are_reported(self, taxonomy):
        bad = dataclasses.replace(MIRAI_STEP_ONE, vulnerability="vuln.ghost", action="action.ghost")
        report = validate_incident_chain(taxonomy, IncidentChain(name="bad", steps=(bad,)))
        assert {v.rule for v in report.violations} == {"unknown element"}
        assert len(report.violations) == 2

    def test_second_step_must_reuse_a_carried_forward_asset(self, taxonomy):
        unchained = dataclasses.replace(
            MIRAI_STEP_TWO,
            assets={SubDimension.EQUIPMENT: "asset.equipment.commercial-pc"},
        )
        report = validate_incident_chain(taxonomy, IncidentChain(name="loose", steps=(MIRAI_STEP_ONE, unchained)))
        assert any(v.rule == "step not chained" for v in report.violations)

    def test_property_outside_vulnerability_map_is_reported(self, taxonomy):
        bad = dataclasses.replace(MIRAI_STEP_ONE, properties=frozenset({"prop.safety"}))
        report = validate_incident_chain(taxonomy, IncidentChain(name="bad", steps=(bad,)))
        assert any(v.rule == "property not compromised by vulnerability" for v in report.violations)


class TestQueryTaxonomy:
    def test_communications_vulnerabilities(self, taxonomy):
        found = query_taxonomy(taxonomy, {"dimension": "vulnerabilities", "category": "communications"})
        assert found
        assert all(v.category is VulnerabilityCategory.COMMUNICATIONS for v in found)
        assert [v.id for v in found] == sorted(v.id for v in found)

    def test_actions_by_mechanism(self, taxonomy):
        found = query_taxonomy(taxonomy, {"dimension": "actions", "mechanism_category": "subvert_access_control"})
        assert {a.id for a in found} == {
            "action.access.default-credential-login",
            "action.access.physical-bypass",
            "action.access.session-hijacking",
        }

    def test_bare_risk_domain_selector_lists_vulnerabilities(self, taxonomy):
        found = query_taxonomy(taxonomy, {"risk_domain": DOMAIN_IDS["communications_security"]})
        assert [v.id for v in found] == list(taxonomy.vulnerabilities_by_domain[DOMAIN_IDS["communications_security"]])

    def test_assets_by_sub_dimension(self, taxonomy):
        found = query_taxonomy(taxonomy, {"dimension": "assets", "sub_dimension": "equipment"})
        assert {a.id for a in found} == {
            "asset.equipment.commercial-pc",
            "asset.equipment.specialized-hardware",
            "asset.equipment.compromised-device-fleet",
        }

    def test_unknown_selector_field_is_an_input_error(self, taxonomy):
        with pytest.raises(ValueError, match="unknown selector field"):
            query_taxonomy(taxonomy, {"dimension": "assets", "flavor": "spicy"})

    def test_unknown_dimension_is_an_input_error(self, taxonomy):
        with pytest.raises(ValueError, match="unknown dimension"):
            query_taxonomy(taxonomy, {"dimension": "controls"})


class TestDefaultCatalogShape:
    def test_asset_sub_dimensions_cover_all_six(self, taxonomy):
        assert {a.sub_dimension for a in taxonomy.assets} == set(SubDimension)

    def test_actions_cover_all_seven_mechanisms(self, taxonomy):
        from iotraq.taxonomy import MechanismCategory

        assert {a.mechanism_category for a in taxonomy.actions} == set(MechanismCategory)

    def test_vulnerabilities_cover_all_three_categories(self, taxonomy):
        assert {v.category for v in taxonomy.vulnerabilities} == set(VulnerabilityCategory)

    def test_five_properties(self, taxonomy):
        assert len(taxonomy.properties) == 5

    def test_every_domain_has_producer_and_consumer_controls(self, taxonomy):
        for domain_id in taxonomy.domain_order:
            audiences = {c.audience for c in taxonomy.controls if c.risk_domain == domain_id}
            assert audiences == {Audience.PRODUCER, Audience.CONSUMER}, domain_id

    def test_communications_vulnerabilities_live_in_communications_security(self, taxonomy):
        for v in taxonomy.vulnerabilities:
            if v.category is VulnerabilityCategory.COMMUNICATIONS:
                assert v.risk_domain == DOMAIN_IDS["communications_security"]
