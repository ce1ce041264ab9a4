"""JSON document formats for taxonomies, assessments, and reports, plus chart exports.

Every document carries a ``schema_version``; loaders reject unknown major
versions outright and otherwise return either a fully validated object or an
exhaustive list of problems.  Unknown keys are rejected so that typos cannot
silently drop data.
"""

from __future__ import annotations

import json
import os
import tempfile
from datetime import datetime
from functools import lru_cache
from importlib import resources
from io import StringIO
from pathlib import Path
import csv
from typing import Any, Mapping

from .assessment import AssessmentBundle, AssessmentReport, Organization, validate_assessment
from .errors import (
    DocumentValidationError,
    ParseError,
    SchemaVersionError,
    ValidationIssue,
)
from .maturity import ControlScores
from .risk import (
    DomainRiskReport,
    ImpactWeights,
    PrevalencyScores,
    RiskScale,
    ThreatActorProfile,
    VulnerabilityRiskPoint,
)
from .sensitivity import ControlSensitivity, SensitivityConfig, SensitivityResult, SensitivityScore
from .taxonomy import (
    ActionAssetRequirement,
    ActionElement,
    AssetElement,
    AttackStep,
    Audience,
    Control,
    ControlKind,
    DomainName,
    IncidentChain,
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
    validate_taxonomy,
)

SCHEMA_VERSION = "1.0"
_SUPPORTED_MAJOR = "1"

CHART_VIEWS = ("domain_bars", "risk_matrix", "sensitivity_top_n")


def _check_schema_version(doc: Mapping[str, Any], kind: str) -> None:
    version = doc.get("schema_version")
    if version is None:
        raise DocumentValidationError(
            f"{kind} document invalid",
            [ValidationIssue("schema_version", "field is mandatory")],
        )
    if not isinstance(version, str) or "." not in version:
        raise SchemaVersionError(
            f"{kind} document declares malformed schema_version {version!r}",
            [ValidationIssue("schema_version", f"{version!r} is not a MAJOR.MINOR string")],
        )
    major = version.split(".", 1)[0]
    if major != _SUPPORTED_MAJOR:
        raise SchemaVersionError(
            f"{kind} document declares unsupported schema_version {version!r}",
            [ValidationIssue("schema_version", f"major version {major!r} is not supported (expected {_SUPPORTED_MAJOR})")],
        )


class _Reader:
    """Collects validation issues while walking a parsed JSON document."""

    def __init__(self) -> None:
        self.issues: list[ValidationIssue] = []

    def add(self, path: str, message: str) -> None:
        self.issues.append(ValidationIssue(path, message))

    def check_keys(self, obj: Mapping[str, Any], path: str, required: tuple[str, ...], optional: tuple[str, ...] = ()) -> bool:
        ok = True
        for key in required:
            if key not in obj:
                self.add(f"{path}.{key}" if path else key, "required key is missing")
                ok = False
        for key in obj:
            if key not in required and key not in optional:
                self.add(f"{path}.{key}" if path else key, "unknown key")
                ok = False
        return ok

    def str_at(self, obj: Mapping[str, Any], key: str, path: str, default: str | None = None) -> str | None:
        value = obj.get(key, default)
        if not isinstance(value, str):
            self.add(f"{path}.{key}" if path else key, f"expected a string, got {value!r}")
            return default
        return value

    def number_at(self, obj: Mapping[str, Any], key: str, path: str, default: float | None = None) -> float | None:
        value = obj.get(key, default)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.add(f"{path}.{key}" if path else key, f"expected a number, got {value!r}")
            return default
        return float(value)

    def list_at(self, obj: Mapping[str, Any], key: str, path: str) -> list:
        value = obj.get(key, [])
        if not isinstance(value, list):
            self.add(f"{path}.{key}" if path else key, f"expected a list, got {value!r}")
            return []
        return value

    def obj_at(self, obj: Mapping[str, Any], key: str, path: str) -> dict:
        value = obj.get(key, {})
        if not isinstance(value, dict):
            self.add(f"{path}.{key}" if path else key, f"expected an object, got {value!r}")
            return {}
        return value

    def number_map_at(self, obj: Mapping[str, Any], key: str, path: str) -> dict[str, float]:
        raw = self.obj_at(obj, key, path)
        out: dict[str, float] = {}
        for entry_key, value in raw.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                self.add(f"{path}.{key}[{entry_key}]" if path else f"{key}[{entry_key}]", f"expected a number, got {value!r}")
                continue
            out[str(entry_key)] = float(value)
        return out

    def enum_at(self, enum_cls, obj: Mapping[str, Any], key: str, path: str):
        value = self.str_at(obj, key, path)
        if value is None:
            return None
        try:
            return enum_cls(value)
        except ValueError:
            allowed = ", ".join(member.value for member in enum_cls)
            self.add(f"{path}.{key}" if path else key, f"{value!r} is not one of: {allowed}")
            return None


# --------------------------------------------------------------------------- taxonomy

_TAXONOMY_KEYS = (
    "schema_version",
    "version",
    "assets",
    "actions",
    "vulnerabilities",
    "properties",
    "risk_domains",
    "controls",
    "action_asset_requirements",
    "vulnerability_action_maps",
    "vulnerability_property_maps",
)


def parse_taxonomy(doc: Mapping[str, Any], *, validate: bool = True) -> TaxonomyBundle:
    """Build a taxonomy from its JSON document, checking structure and graph invariants."""
    if not isinstance(doc, Mapping):
        raise ParseError("taxonomy document must be a JSON object")
    _check_schema_version(doc, "taxonomy")
    r = _Reader()
    r.check_keys(doc, "", required=_TAXONOMY_KEYS)
    version = r.str_at(doc, "version", "", default="") or ""

    assets = []
    for i, entry in enumerate(r.list_at(doc, "assets", "")):
        path = f"assets[{i}]"
        if not isinstance(entry, dict) or not r.check_keys(entry, path, ("id", "sub_dimension", "label")):
            continue
        sub = r.enum_at(SubDimension, entry, "sub_dimension", path)
        if sub is None:
            continue
        assets.append(AssetElement(id=r.str_at(entry, "id", path) or "", sub_dimension=sub, label=r.str_at(entry, "label", path) or ""))

    actions = []
    for i, entry in enumerate(r.list_at(doc, "actions", "")):
        path = f"actions[{i}]"
        if not isinstance(entry, dict) or not r.check_keys(entry, path, ("id", "mechanism_category", "pattern_category", "pattern", "label")):
            continue
        mechanism = r.enum_at(MechanismCategory, entry, "mechanism_category", path)
        if mechanism is None:
            continue
        actions.append(
            ActionElement(
                id=r.str_at(entry, "id", path) or "",
                mechanism_category=mechanism,
                pattern_category=r.str_at(entry, "pattern_category", path) or "",
                pattern=r.str_at(entry, "pattern", path) or "",
                label=r.str_at(entry, "label", path) or "",
            )
        )

    vulnerabilities = []
    for i, entry in enumerate(r.list_at(doc, "vulnerabilities", "")):
        path = f"vulnerabilities[{i}]"
        if not isinstance(entry, dict) or not r.check_keys(entry, path, ("id", "category", "sub_category", "label", "risk_domain")):
            continue
        category = r.enum_at(VulnerabilityCategory, entry, "category", path)
        if category is None:
            continue
        risk_domain = entry.get("risk_domain")
        if risk_domain is not None and not isinstance(risk_domain, str):
            r.add(f"{path}.risk_domain", f"expected a string or null, got {risk_domain!r}")
            risk_domain = None
        vulnerabilities.append(
            VulnerabilityElement(
                id=r.str_at(entry, "id", path) or "",
                category=category,
                sub_category=r.str_at(entry, "sub_category", path) or "",
                label=r.str_at(entry, "label", path) or "",
                risk_domain=risk_domain,
            )
        )

    properties = []
    for i, entry in enumerate(r.list_at(doc, "properties", "")):
        path = f"properties[{i}]"
        if not isinstance(entry, dict) or not r.check_keys(entry, path, ("id", "kind", "label")):
            continue
        kind = r.enum_at(PropertyKind, entry, "kind", path)
        if kind is None:
            continue
        properties.append(PropertyElement(id=r.str_at(entry, "id", path) or "", kind=kind, label=r.str_at(entry, "label", path) or ""))

    risk_domains = []
    for i, entry in enumerate(r.list_at(doc, "risk_domains", "")):
        path = f"risk_domains[{i}]"
        if not isinstance(entry, dict) or not r.check_keys(entry, path, ("id", "name")):
            continue
        name = r.enum_at(DomainName, entry, "name", path)
        if name is None:
            continue
        risk_domains.append(RiskDomain(id=r.str_at(entry, "id", path) or "", name=name))

    controls = []
    for i, entry in enumerate(r.list_at(doc, "controls", "")):
        path = f"controls[{i}]"
        if not isinstance(entry, dict) or not r.check_keys(entry, path, ("id", "risk_domain", "audience", "kind", "label", "mitigated_vulnerabilities")):
            continue
        audience = r.enum_at(Audience, entry, "audience", path)
        kind = r.enum_at(ControlKind, entry, "kind", path)
        if audience is None or kind is None:
            continue
        mitigated = entry.get("mitigated_vulnerabilities", [])
        if not isinstance(mitigated, list) or not all(isinstance(v, str) for v in mitigated):
            r.add(f"{path}.mitigated_vulnerabilities", "expected a list of vulnerability ids")
            mitigated = []
        controls.append(
            Control(
                id=r.str_at(entry, "id", path) or "",
                risk_domain=r.str_at(entry, "risk_domain", path) or "",
                audience=audience,
                kind=kind,
                label=r.str_at(entry, "label", path) or "",
                mitigated_vulnerabilities=frozenset(mitigated),
            )
        )

    requirements = []
    for i, entry in enumerate(r.list_at(doc, "action_asset_requirements", "")):
        path = f"action_asset_requirements[{i}]"
        if not isinstance(entry, dict) or not r.check_keys(entry, path, ("action", "required_assets")):
            continue
        raw_map = r.obj_at(entry, "required_assets", path)
        required_assets: dict[SubDimension, frozenset[str]] = {}
        for raw_sub, raw_ids in raw_map.items():
            try:
                sub = SubDimension(raw_sub)
            except ValueError:
                r.add(f"{path}.required_assets.{raw_sub}", "not a sub-dimension")
                continue
            if not isinstance(raw_ids, list) or not all(isinstance(v, str) for v in raw_ids):
                r.add(f"{path}.required_assets.{raw_sub}", "expected a list of asset ids")
                continue
            required_assets[sub] = frozenset(raw_ids)
        requirements.append(ActionAssetRequirement(action=r.str_at(entry, "action", path) or "", required_assets=required_assets))

    action_maps = []
    for i, entry in enumerate(r.list_at(doc, "vulnerability_action_maps", "")):
        path = f"vulnerability_action_maps[{i}]"
        if not isinstance(entry, dict) or not r.check_keys(entry, path, ("vulnerability", "exploiting_actions")):
            continue
        ids = entry.get("exploiting_actions", [])
        if not isinstance(ids, list) or not all(isinstance(v, str) for v in ids):
            r.add(f"{path}.exploiting_actions", "expected a list of action ids")
            ids = []
        action_maps.append(VulnerabilityActionMap(vulnerability=r.str_at(entry, "vulnerability", path) or "", exploiting_actions=frozenset(ids)))

    property_maps = []
    for i, entry in enumerate(r.list_at(doc, "vulnerability_property_maps", "")):
        path = f"vulnerability_property_maps[{i}]"
        if not isinstance(entry, dict) or not r.check_keys(entry, path, ("vulnerability", "compromised_properties")):
            continue
        ids = entry.get("compromised_properties", [])
        if not isinstance(ids, list) or not all(isinstance(v, str) for v in ids):
            r.add(f"{path}.compromised_properties", "expected a list of property ids")
            ids = []
        property_maps.append(VulnerabilityPropertyMap(vulnerability=r.str_at(entry, "vulnerability", path) or "", compromised_properties=frozenset(ids)))

    bundle = TaxonomyBundle(
        version=version,
        assets=tuple(assets),
        actions=tuple(actions),
        vulnerabilities=tuple(vulnerabilities),
        properties=tuple(properties),
        risk_domains=tuple(risk_domains),
        controls=tuple(controls),
        action_asset_requirements=tuple(requirements),
        vulnerability_action_maps=tuple(action_maps),
        vulnerability_property_maps=tuple(property_maps),
    )

    if validate and not r.issues:
        report = validate_taxonomy(bundle)
        for violation in report.violations:
            r.add(violation.element_id, f"{violation.rule}: {violation.message}")
    if r.issues:
        raise DocumentValidationError("taxonomy document invalid", r.issues)
    return bundle


def taxonomy_to_doc(bundle: TaxonomyBundle) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "version": bundle.version,
        "risk_domains": [{"id": d.id, "name": d.name.value} for d in bundle.risk_domains],
        "assets": [
            {"id": a.id, "sub_dimension": a.sub_dimension.value, "label": a.label} for a in bundle.assets
        ],
        "actions": [
            {
                "id": a.id,
                "mechanism_category": a.mechanism_category.value,
                "pattern_category": a.pattern_category,
                "pattern": a.pattern,
                "label": a.label,
            }
            for a in bundle.actions
        ],
        "vulnerabilities": [
            {
                "id": v.id,
                "category": v.category.value,
                "sub_category": v.sub_category,
                "label": v.label,
                "risk_domain": v.risk_domain,
            }
            for v in bundle.vulnerabilities
        ],
        "properties": [{"id": p.id, "kind": p.kind.value, "label": p.label} for p in bundle.properties],
        "controls": [
            {
                "id": c.id,
                "risk_domain": c.risk_domain,
                "audience": c.audience.value,
                "kind": c.kind.value,
                "label": c.label,
                "mitigated_vulnerabilities": sorted(c.mitigated_vulnerabilities),
            }
            for c in bundle.controls
        ],
        "action_asset_requirements": [
            {
                "action": req.action,
                "required_assets": {
                    sub.value: sorted(req.required_assets[sub])
                    for sub in SubDimension
                    if sub in req.required_assets
                },
            }
            for req in bundle.action_asset_requirements
        ],
        "vulnerability_action_maps": [
            {"vulnerability": m.vulnerability, "exploiting_actions": sorted(m.exploiting_actions)}
            for m in bundle.vulnerability_action_maps
        ],
        "vulnerability_property_maps": [
            {"vulnerability": m.vulnerability, "compromised_properties": sorted(m.compromised_properties)}
            for m in bundle.vulnerability_property_maps
        ],
    }


# --------------------------------------------------------------------------- assessments

_ASSESSMENT_KEYS_REQUIRED = (
    "schema_version",
    "id",
    "organization",
    "taxonomy_ref",
    "threat_actors",
    "prevalency",
    "impacts",
    "control_scores",
)
_ASSESSMENT_KEYS_OPTIONAL = ("scale", "sensitivity")


def parse_threat_actor(entry: Mapping[str, Any], path: str, r: _Reader) -> ThreatActorProfile | None:
    if not isinstance(entry, Mapping):
        r.add(path, f"expected an object, got {entry!r}")
        return None
    if not r.check_keys(entry, path, ("id", "label", "asset_likelihoods", "action_likelihoods")):
        return None
    return ThreatActorProfile(
        id=r.str_at(entry, "id", path) or "",
        label=r.str_at(entry, "label", path) or "",
        asset_likelihoods=r.number_map_at(entry, "asset_likelihoods", path),
        action_likelihoods=r.number_map_at(entry, "action_likelihoods", path),
    )


def parse_assessment(doc: Mapping[str, Any], taxonomy: TaxonomyBundle) -> AssessmentBundle:
    """Build a fully validated assessment or raise with the complete error list."""
    if not isinstance(doc, Mapping):
        raise ParseError("assessment document must be a JSON object")
    _check_schema_version(doc, "assessment")
    r = _Reader()
    r.check_keys(doc, "", required=_ASSESSMENT_KEYS_REQUIRED, optional=_ASSESSMENT_KEYS_OPTIONAL)

    org_raw = r.obj_at(doc, "organization", "")
    roles: list[Any] = []
    org_name = ""
    if org_raw:
        if r.check_keys(org_raw, "organization", ("name", "roles")):
            org_name = r.str_at(org_raw, "name", "organization") or ""
            raw_roles = r.list_at(org_raw, "roles", "organization")
            roles = [role for role in raw_roles]
    organization = Organization(name=org_name, roles=tuple(roles))

    actors = []
    for i, entry in enumerate(r.list_at(doc, "threat_actors", "")):
        actor = parse_threat_actor(entry, f"threat_actors[{i}]", r)
        if actor is not None:
            actors.append(actor)

    prevalency_raw = r.obj_at(doc, "prevalency", "")
    if prevalency_raw:
        r.check_keys(prevalency_raw, "prevalency", ("scores",))
    prevalency = PrevalencyScores(scores=r.number_map_at(prevalency_raw, "scores", "prevalency"))

    impacts_raw = r.obj_at(doc, "impacts", "")
    if impacts_raw:
        r.check_keys(impacts_raw, "impacts", ("weights", "max_weight"))
    impacts = ImpactWeights(
        weights=r.number_map_at(impacts_raw, "weights", "impacts"),
        max_weight=r.number_at(impacts_raw, "max_weight", "impacts", default=0.0) or 0.0,
    )

    scores_raw = r.obj_at(doc, "control_scores", "")
    if scores_raw:
        r.check_keys(scores_raw, "control_scores", (), optional=("implementation", "effectiveness"))
    control_scores = ControlScores(
        implementation=r.number_map_at(scores_raw, "implementation", "control_scores"),
        effectiveness=r.number_map_at(scores_raw, "effectiveness", "control_scores"),
    )

    scale = RiskScale(r_min=0.0, r_max=100.0)
    if "scale" in doc:
        scale_raw = r.obj_at(doc, "scale", "")
        if r.check_keys(scale_raw, "scale", ("r_min", "r_max")):
            scale = RiskScale(
                r_min=r.number_at(scale_raw, "r_min", "scale", default=0.0) or 0.0,
                r_max=r.number_at(scale_raw, "r_max", "scale", default=100.0) or 0.0,
            )

    sensitivity = SensitivityConfig()
    if "sensitivity" in doc:
        sens_raw = r.obj_at(doc, "sensitivity", "")
        if r.check_keys(sens_raw, "sensitivity", (), optional=("delta", "top_n")):
            delta = r.number_at(sens_raw, "delta", "sensitivity", default=0.10)
            top_n_raw = sens_raw.get("top_n", 10)
            if isinstance(top_n_raw, bool) or not isinstance(top_n_raw, int):
                r.add("sensitivity.top_n", f"expected an integer, got {top_n_raw!r}")
                top_n_raw = 10
            if delta is None or not 0.0 < delta <= 1.0:
                r.add("sensitivity.delta", f"delta must be positive and at most 1, got {delta!r}")
            elif top_n_raw < 1:
                r.add("sensitivity.top_n", f"top_n must be a positive integer, got {top_n_raw!r}")
            else:
                sensitivity = SensitivityConfig(delta=float(delta), top_n=top_n_raw)

    bundle = AssessmentBundle(
        id=r.str_at(doc, "id", "") or "",
        organization=organization,
        taxonomy_ref=r.str_at(doc, "taxonomy_ref", "") or "",
        threat_actors=tuple(actors),
        prevalency=prevalency,
        impacts=impacts,
        control_scores=control_scores,
        scale=scale,
        sensitivity=sensitivity,
    )
    issues = r.issues + validate_assessment(bundle, taxonomy)
    if issues:
        raise DocumentValidationError("assessment document invalid", issues)
    return bundle


def assessment_to_doc(bundle: AssessmentBundle) -> dict[str, Any]:
    def sorted_map(mapping: Mapping[str, float]) -> dict[str, float]:
        return {key: mapping[key] for key in sorted(mapping)}

    return {
        "schema_version": SCHEMA_VERSION,
        "id": bundle.id,
        "organization": {
            "name": bundle.organization.name,
            "roles": [role.value if hasattr(role, "value") else role for role in bundle.organization.roles],
        },
        "taxonomy_ref": bundle.taxonomy_ref,
        "threat_actors": [
            {
                "id": actor.id,
                "label": actor.label,
                "asset_likelihoods": sorted_map(actor.asset_likelihoods),
                "action_likelihoods": sorted_map(actor.action_likelihoods),
            }
            for actor in bundle.threat_actors
        ],
        "prevalency": {"scores": sorted_map(bundle.prevalency.scores)},
        "impacts": {"weights": sorted_map(bundle.impacts.weights), "max_weight": bundle.impacts.max_weight},
        "control_scores": {
            "implementation": sorted_map(bundle.control_scores.implementation),
            "effectiveness": sorted_map(bundle.control_scores.effectiveness),
        },
        "scale": {"r_min": bundle.scale.r_min, "r_max": bundle.scale.r_max},
        "sensitivity": {"delta": bundle.sensitivity.delta, "top_n": bundle.sensitivity.top_n},
    }


# --------------------------------------------------------------------------- reports

_REPORT_KEYS = (
    "schema_version",
    "assessment_id",
    "generated_at",
    "taxonomy_version",
    "domain_reports",
    "risk_matrix",
    "sensitivity",
)


def report_to_doc(report: AssessmentReport) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "assessment_id": report.assessment_id,
        "generated_at": report.generated_at.isoformat(),
        "taxonomy_version": report.taxonomy_version,
        "domain_reports": [
            {
                "risk_domain": d.risk_domain,
                "inherent_raw": d.inherent_raw,
                "inherent_normalized": d.inherent_normalized,
                "residual_raw": d.residual_raw,
                "residual_normalized": d.residual_normalized,
            }
            for d in report.domain_reports
        ],
        "risk_matrix": [
            {"vulnerability": p.vulnerability, "likelihood": p.likelihood, "impact": p.impact}
            for p in report.risk_matrix
        ],
        "sensitivity": {
            "delta": report.sensitivity.config.delta,
            "top_n": report.sensitivity.config.top_n,
            "per_domain": {
                domain_id: [
                    {"control": s.control, "delta_residual_normalized": s.delta_residual_normalized}
                    for s in scores
                ]
                for domain_id, scores in report.sensitivity.per_domain.items()
            },
            "overall": [
                {"control": s.control, "delta_residual_normalized": s.delta_residual_normalized}
                for s in report.sensitivity.overall
            ],
        },
    }


def parse_report(doc: Mapping[str, Any]) -> AssessmentReport:
    if not isinstance(doc, Mapping):
        raise ParseError("report document must be a JSON object")
    _check_schema_version(doc, "report")
    r = _Reader()
    r.check_keys(doc, "", required=_REPORT_KEYS)

    generated_at = None
    raw_generated = r.str_at(doc, "generated_at", "")
    if raw_generated is not None:
        try:
            generated_at = datetime.fromisoformat(raw_generated)
        except ValueError:
            r.add("generated_at", f"{raw_generated!r} is not an ISO-8601 timestamp")

    domains = []
    seen_domains = set()
    for i, entry in enumerate(r.list_at(doc, "domain_reports", "")):
        path = f"domain_reports[{i}]"
        if not isinstance(entry, dict) or not r.check_keys(
            entry, path, ("risk_domain", "inherent_raw", "inherent_normalized", "residual_raw", "residual_normalized")
        ):
            continue
        domain_id = r.str_at(entry, "risk_domain", path) or ""
        if domain_id in seen_domains:
            r.add(path, f"duplicate domain entry {domain_id!r}")
        seen_domains.add(domain_id)
        domains.append(
            DomainRiskReport(
                risk_domain=domain_id,
                inherent_raw=r.number_at(entry, "inherent_raw", path, 0.0) or 0.0,
                inherent_normalized=r.number_at(entry, "inherent_normalized", path, 0.0) or 0.0,
                residual_raw=r.number_at(entry, "residual_raw", path, 0.0) or 0.0,
                residual_normalized=r.number_at(entry, "residual_normalized", path, 0.0) or 0.0,
            )
        )
    if len(domains) != 9:
        r.add("domain_reports", f"expected exactly one entry per risk domain (9), found {len(domains)}")

    matrix = []
    for i, entry in enumerate(r.list_at(doc, "risk_matrix", "")):
        path = f"risk_matrix[{i}]"
        if not isinstance(entry, dict) or not r.check_keys(entry, path, ("vulnerability", "likelihood", "impact")):
            continue
        matrix.append(
            VulnerabilityRiskPoint(
                vulnerability=r.str_at(entry, "vulnerability", path) or "",
                likelihood=r.number_at(entry, "likelihood", path, 0.0) or 0.0,
                impact=r.number_at(entry, "impact", path, 0.0) or 0.0,
            )
        )

    sens_raw = r.obj_at(doc, "sensitivity", "")
    config = SensitivityConfig()
    per_domain: dict[str, tuple[SensitivityScore, ...]] = {}
    overall: list[ControlSensitivity] = []
    if sens_raw and r.check_keys(sens_raw, "sensitivity", ("delta", "top_n", "per_domain", "overall")):
        delta = r.number_at(sens_raw, "delta", "sensitivity", 0.10) or 0.10
        top_n = sens_raw.get("top_n", 10)
        if isinstance(top_n, bool) or not isinstance(top_n, int) or top_n < 1 or not 0.0 < delta <= 1.0:
            r.add("sensitivity", f"invalid config delta={delta!r} top_n={top_n!r}")
        else:
            config = SensitivityConfig(delta=delta, top_n=top_n)
        for domain_id, entries in r.obj_at(sens_raw, "per_domain", "sensitivity").items():
            if not isinstance(entries, list):
                r.add(f"sensitivity.per_domain[{domain_id}]", "expected a list")
                continue
            scores = []
            for i, entry in enumerate(entries):
                path = f"sensitivity.per_domain[{domain_id}][{i}]"
                if not isinstance(entry, dict) or not r.check_keys(entry, path, ("control", "delta_residual_normalized")):
                    continue
                scores.append(
                    SensitivityScore(
                        risk_domain=domain_id,
                        control=r.str_at(entry, "control", path) or "",
                        delta_residual_normalized=r.number_at(entry, "delta_residual_normalized", path, 0.0) or 0.0,
                    )
                )
            per_domain[domain_id] = tuple(scores)
        for i, entry in enumerate(r.list_at(sens_raw, "overall", "sensitivity")):
            path = f"sensitivity.overall[{i}]"
            if not isinstance(entry, dict) or not r.check_keys(entry, path, ("control", "delta_residual_normalized")):
                continue
            overall.append(
                ControlSensitivity(
                    control=r.str_at(entry, "control", path) or "",
                    delta_residual_normalized=r.number_at(entry, "delta_residual_normalized", path, 0.0) or 0.0,
                )
            )

    if r.issues:
        raise DocumentValidationError("report document invalid", r.issues)
    assert generated_at is not None
    return AssessmentReport(
        assessment_id=r.str_at(doc, "assessment_id", "") or "",
        generated_at=generated_at,
        taxonomy_version=r.str_at(doc, "taxonomy_version", "") or "",
        domain_reports=tuple(domains),
        risk_matrix=tuple(matrix),
        sensitivity=SensitivityResult(config=config, per_domain=per_domain, overall=tuple(overall)),
    )


# --------------------------------------------------------------------------- incident chains

def parse_incident_chain(doc: Mapping[str, Any]) -> IncidentChain:
    if not isinstance(doc, Mapping):
        raise ParseError("incident chain document must be a JSON object")
    r = _Reader()
    r.check_keys(doc, "", required=("name", "steps"))
    steps = []
    for i, entry in enumerate(r.list_at(doc, "steps", "")):
        path = f"steps[{i}]"
        if not isinstance(entry, dict) or not r.check_keys(
            entry, path, ("action", "vulnerability"), optional=("assets", "properties", "carried_forward")
        ):
            continue
        assets_raw = r.obj_at(entry, "assets", path)
        assets: dict[SubDimension, str] = {}
        for raw_sub, aid in assets_raw.items():
            try:
                sub = SubDimension(raw_sub)
            except ValueError:
                r.add(f"{path}.assets.{raw_sub}", "not a sub-dimension")
                continue
            if not isinstance(aid, str):
                r.add(f"{path}.assets.{raw_sub}", f"expected an asset id, got {aid!r}")
                continue
            assets[sub] = aid
        properties = entry.get("properties", [])
        carried = entry.get("carried_forward", [])
        for key, value in (("properties", properties), ("carried_forward", carried)):
            if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
                r.add(f"{path}.{key}", "expected a list of ids")
        steps.append(
            AttackStep(
                assets=assets,
                action=r.str_at(entry, "action", path) or "",
                vulnerability=r.str_at(entry, "vulnerability", path) or "",
                properties=frozenset(properties if isinstance(properties, list) else []),
                carried_forward=frozenset(carried if isinstance(carried, list) else []),
            )
        )
    if r.issues:
        raise DocumentValidationError("incident chain document invalid", r.issues)
    return IncidentChain(name=r.str_at(doc, "name", "") or "", steps=tuple(steps))


# --------------------------------------------------------------------------- files

def dumps(doc: Mapping[str, Any]) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def atomic_write_text(path: Path | str, text: str) -> None:
    """Write via a temp file in the same directory plus an atomic rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


def read_json(path: Path | str) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(
            f"{path}: not valid UTF-8",
            [ValidationIssue(f"byte {exc.start}", exc.reason)],
        ) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: not well-formed JSON",
            [ValidationIssue(f"line {exc.lineno}, column {exc.colno}", exc.msg)],
        ) from exc


def load_taxonomy(path: Path | str) -> TaxonomyBundle:
    return parse_taxonomy(read_json(path))


def load_assessment(path: Path | str, taxonomy: TaxonomyBundle) -> AssessmentBundle:
    return parse_assessment(read_json(path), taxonomy)


def load_report(path: Path | str) -> AssessmentReport:
    return parse_report(read_json(path))


def save_assessment(bundle: AssessmentBundle, path: Path | str) -> None:
    atomic_write_text(path, dumps(assessment_to_doc(bundle)))


def save_report(report: AssessmentReport, path: Path | str) -> None:
    atomic_write_text(path, dumps(report_to_doc(report)))


def data_path(name: str) -> Path:
    """Filesystem path of a packaged dataset (the package is installed unzipped)."""
    return Path(str(resources.files("iotraq").joinpath("data", name)))


@lru_cache(maxsize=1)
def load_default_taxonomy() -> TaxonomyBundle:
    """The taxonomy dataset shipped with the package, parsed and validated once."""
    return parse_taxonomy(read_json(data_path("default_taxonomy.json")))


def load_threat_actor_presets() -> list[ThreatActorProfile]:
    doc = read_json(data_path("threat_actor_presets.json"))
    r = _Reader()
    if not isinstance(doc, Mapping) or "threat_actors" not in doc:
        raise ParseError("preset document must contain a threat_actors list")
    actors = []
    for i, entry in enumerate(doc["threat_actors"]):
        actor = parse_threat_actor(entry, f"threat_actors[{i}]", r)
        if actor is not None:
            actors.append(actor)
    if r.issues:
        raise DocumentValidationError("preset document invalid", r.issues)
    return actors


def load_example_assessment(taxonomy: TaxonomyBundle | None = None) -> AssessmentBundle:
    if taxonomy is None:
        taxonomy = load_default_taxonomy()
    return parse_assessment(read_json(data_path("example_assessment.json")), taxonomy)


# --------------------------------------------------------------------------- chart exports

def export_chart_data(report: AssessmentReport, view: str) -> str:
    """Flatten one report view into comma-separated text with a stable column order."""
    buffer = StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    if view == "domain_bars":
        writer.writerow(["risk_domain", "inherent_normalized", "residual_normalized"])
        for d in report.domain_reports:
            writer.writerow([d.risk_domain, repr(d.inherent_normalized), repr(d.residual_normalized)])
    elif view == "risk_matrix":
        writer.writerow(["vulnerability", "likelihood", "impact"])
        for p in report.risk_matrix:
            writer.writerow([p.vulnerability, repr(p.likelihood), repr(p.impact)])
    elif view == "sensitivity_top_n":
        writer.writerow(["rank", "control", "delta_residual_normalized"])
        top = report.sensitivity.overall[: report.sensitivity.config.top_n]
        for rank, s in enumerate(top, start=1):
            writer.writerow([rank, s.control, repr(s.delta_residual_normalized)])
    else:
        raise ValueError(f"unknown view {view!r}; expected one of {CHART_VIEWS}")
    return buffer.getvalue()
