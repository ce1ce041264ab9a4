"""Four-dimensional IoT attack taxonomy: element types, cross-dimension mappings, and validation.

The taxonomy has four dimensions (attacker assets, attacker actions, exploitable
vulnerabilities, compromised properties), a nine-way partition of the
vulnerability dimension into risk domains, and a producer/consumer control
catalog.  A loaded :class:`TaxonomyBundle` is immutable by convention: mutation
happens only by replacing the whole bundle.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping


class SubDimension(str, Enum):
    """The six sub-dimensions of the attacker-asset dimension."""

    PRIOR_INFORMATION = "prior_information"
    LOCATION_ACCESS = "location_access"
    EQUIPMENT = "equipment"
    TECHNICAL_SKILLS = "technical_skills"
    TIME_REQUIREMENT = "time_requirement"
    PERSISTENCE_REQUIREMENTS = "persistence_requirements"


class MechanismCategory(str, Enum):
    """The seven top-level attack mechanism categories of the action dimension."""

    COLLECT_ANALYZE_INFORMATION = "collect_analyze_information"
    PROBABILISTIC_TECHNIQUES = "probabilistic_techniques"
    DECEPTIVE_INTERACTIONS = "deceptive_interactions"
    MANIPULATE_DATA_STRUCTURES = "manipulate_data_structures"
    ABUSE_EXISTING_FUNCTIONALITY = "abuse_existing_functionality"
    SUBVERT_ACCESS_CONTROL = "subvert_access_control"
    MANIPULATE_SYSTEM_RESOURCES = "manipulate_system_resources"


class VulnerabilityCategory(str, Enum):
    COMMUNICATIONS = "communications"
    SOFTWARE = "software"
    HARDWARE = "hardware"


class PropertyKind(str, Enum):
    CONFIDENTIALITY = "confidentiality"
    INTEGRITY = "integrity"
    AVAILABILITY = "availability"
    AUTHORIZATION = "authorization"
    SAFETY = "safety"


class DomainName(str, Enum):
    """The nine risk domains that partition the vulnerability dimension."""

    GOVERNANCE_ACCOUNTABILITY = "governance_accountability"
    PHYSICAL_SECURITY = "physical_security"
    ENCRYPTION = "encryption"
    SYSTEMS_SECURITY = "systems_security"
    IDENTITY_ACCESS_MANAGEMENT = "identity_access_management"
    EVENT_LOGGING_MONITORING = "event_logging_monitoring"
    SUPPLY_CHAIN_SECURITY = "supply_chain_security"
    THREAT_VULNERABILITY_MANAGEMENT = "threat_vulnerability_management"
    COMMUNICATIONS_SECURITY = "communications_security"


class Audience(str, Enum):
    """Who operates a control: the device producer or the device consumer."""

    PRODUCER = "producer"
    CONSUMER = "consumer"


class ControlKind(str, Enum):
    TECHNICAL = "technical"
    MANAGEMENT = "management"


@dataclass(frozen=True)
class AssetElement:
    id: str
    sub_dimension: SubDimension
    label: str


@dataclass(frozen=True)
class ActionElement:
    """One attacker action, classified mechanism -> pattern category -> pattern."""

    id: str
    mechanism_category: MechanismCategory
    pattern_category: str
    pattern: str
    label: str


@dataclass(frozen=True)
class VulnerabilityElement:
    id: str
    category: VulnerabilityCategory
    sub_category: str
    label: str
    risk_domain: str | None


@dataclass(frozen=True)
class PropertyElement:
    id: str
    kind: PropertyKind
    label: str


@dataclass(frozen=True)
class RiskDomain:
    id: str
    name: DomainName


@dataclass(frozen=True)
class Control:
    id: str
    risk_domain: str
    audience: Audience
    kind: ControlKind
    label: str
    mitigated_vulnerabilities: frozenset[str]


@dataclass(frozen=True)
class ActionAssetRequirement:
    """Assets an action needs, grouped per sub-dimension.

    A sub-dimension with no entry means the action places no requirement on it.
    """

    action: str
    required_assets: Mapping[SubDimension, frozenset[str]]


@dataclass(frozen=True)
class VulnerabilityActionMap:
    vulnerability: str
    exploiting_actions: frozenset[str]


@dataclass(frozen=True)
class VulnerabilityPropertyMap:
    vulnerability: str
    compromised_properties: frozenset[str]


@dataclass(frozen=True)
class Violation:
    """One broken taxonomy rule, attributed to the offending element."""

    element_id: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.element_id}: {self.rule}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "OK"
        return "\n".join(str(v) for v in self.violations)


@dataclass(frozen=True)
class AttackStep:
    """One individual attack: assets used, action taken, vulnerability exploited.

    ``assets`` holds at most one asset per sub-dimension; an absent sub-dimension
    means the step needed nothing from it.  ``carried_forward`` lists assets the
    step produces for later steps in the chain.
    """

    assets: Mapping[SubDimension, str]
    action: str
    vulnerability: str
    properties: frozenset[str]
    carried_forward: frozenset[str] = frozenset()


@dataclass(frozen=True)
class IncidentChain:
    """An incident decomposed into individual attacks linked through the asset dimension."""

    name: str
    steps: tuple[AttackStep, ...]


@dataclass(eq=True)
class TaxonomyBundle:
    """The full taxonomy graph plus lookup indexes.

    Safe for concurrent reads; derived indexes are computed lazily and cached.
    """

    version: str
    assets: tuple[AssetElement, ...]
    actions: tuple[ActionElement, ...]
    vulnerabilities: tuple[VulnerabilityElement, ...]
    properties: tuple[PropertyElement, ...]
    risk_domains: tuple[RiskDomain, ...]
    controls: tuple[Control, ...]
    action_asset_requirements: tuple[ActionAssetRequirement, ...]
    vulnerability_action_maps: tuple[VulnerabilityActionMap, ...]
    vulnerability_property_maps: tuple[VulnerabilityPropertyMap, ...]

    @cached_property
    def asset_by_id(self) -> dict[str, AssetElement]:
        return {a.id: a for a in self.assets}

    @cached_property
    def action_by_id(self) -> dict[str, ActionElement]:
        return {a.id: a for a in self.actions}

    @cached_property
    def vulnerability_by_id(self) -> dict[str, VulnerabilityElement]:
        return {v.id: v for v in self.vulnerabilities}

    @cached_property
    def property_by_id(self) -> dict[str, PropertyElement]:
        return {p.id: p for p in self.properties}

    @cached_property
    def domain_by_id(self) -> dict[str, RiskDomain]:
        return {d.id: d for d in self.risk_domains}

    @cached_property
    def control_by_id(self) -> dict[str, Control]:
        return {c.id: c for c in self.controls}

    @cached_property
    def requirement_by_action(self) -> dict[str, ActionAssetRequirement]:
        return {r.action: r for r in self.action_asset_requirements}

    @cached_property
    def actions_for_vulnerability(self) -> dict[str, tuple[str, ...]]:
        """Exploiting actions per vulnerability, in canonical (sorted) order."""
        return {
            m.vulnerability: tuple(sorted(m.exploiting_actions))
            for m in self.vulnerability_action_maps
        }

    @cached_property
    def properties_for_vulnerability(self) -> dict[str, tuple[str, ...]]:
        return {
            m.vulnerability: tuple(sorted(m.compromised_properties))
            for m in self.vulnerability_property_maps
        }

    @cached_property
    def vulnerabilities_by_domain(self) -> dict[str, tuple[str, ...]]:
        """Vulnerability ids per risk domain id, in canonical (sorted) order."""
        grouped: dict[str, list[str]] = {d.id: [] for d in self.risk_domains}
        for v in self.vulnerabilities:
            if v.risk_domain in grouped:
                grouped[v.risk_domain].append(v.id)
        return {d: tuple(sorted(ids)) for d, ids in grouped.items()}

    @cached_property
    def controls_for_vulnerability(self) -> dict[str, tuple[str, ...]]:
        """Controls mitigating each vulnerability, before any audience filter."""
        grouped: dict[str, list[str]] = {v.id: [] for v in self.vulnerabilities}
        for c in self.controls:
            for vid in c.mitigated_vulnerabilities:
                if vid in grouped:
                    grouped[vid].append(c.id)
        return {v: tuple(sorted(ids)) for v, ids in grouped.items()}

    @cached_property
    def domain_order(self) -> tuple[str, ...]:
        """Canonical presentation order for the nine risk domains."""
        return tuple(d.id for d in self.risk_domains)


def _is_member(enum_cls: type[Enum], value: object) -> bool:
    if isinstance(value, enum_cls):
        return True
    try:
        enum_cls(value)
    except ValueError:
        return False
    return True


def validate_taxonomy(bundle: TaxonomyBundle) -> ValidationReport:
    """Check every structural invariant of the taxonomy graph.

    Violations are data, not failures: the report enumerates every broken rule
    rather than stopping at the first.  Validation is pure, so repeated calls
    over the same bundle yield identical reports.
    """
    out: list[Violation] = []

    def add(element_id: str, rule: str, message: str) -> None:
        out.append(Violation(element_id=element_id, rule=rule, message=message))

    seen: dict[str, str] = {}
    for kind, elements in (
        ("asset", bundle.assets),
        ("action", bundle.actions),
        ("vulnerability", bundle.vulnerabilities),
        ("property", bundle.properties),
        ("risk domain", bundle.risk_domains),
        ("control", bundle.controls),
    ):
        for element in elements:
            if element.id in seen:
                add(element.id, "duplicate id", f"already declared as {seen[element.id]}")
            else:
                seen[element.id] = kind

    for a in bundle.assets:
        if not _is_member(SubDimension, a.sub_dimension):
            add(a.id, "invalid sub-dimension", f"{a.sub_dimension!r} is not one of the six sub-dimensions")

    category_mechanisms: dict[str, set[str]] = {}
    patterns_seen: dict[tuple[str, str], str] = {}
    for act in bundle.actions:
        if not _is_member(MechanismCategory, act.mechanism_category):
            add(act.id, "invalid mechanism category", f"{act.mechanism_category!r} is not one of the seven mechanisms")
            continue
        mechanism = MechanismCategory(act.mechanism_category).value
        category_mechanisms.setdefault(act.pattern_category, set()).add(mechanism)
        key = (act.pattern_category, act.pattern)
        if key in patterns_seen:
            add(act.id, "duplicate pattern", f"pattern {act.pattern!r} already used in category {act.pattern_category!r} by {patterns_seen[key]}")
        else:
            patterns_seen[key] = act.id
    for category, mechanisms in category_mechanisms.items():
        if len(mechanisms) > 1:
            add(category, "pattern category under multiple mechanisms", f"appears under {sorted(mechanisms)}")

    for v in bundle.vulnerabilities:
        if not _is_member(VulnerabilityCategory, v.category):
            add(v.id, "invalid category", f"{v.category!r} is not one of the three vulnerability categories")
        if v.risk_domain is None:
            add(v.id, "unassigned risk domain", "every vulnerability must belong to exactly one risk domain")
        elif v.risk_domain not in bundle.domain_by_id:
            add(v.id, "dangling reference", f"risk domain {v.risk_domain!r} does not exist")

    for p in bundle.properties:
        if not _is_member(PropertyKind, p.kind):
            add(p.id, "invalid property kind", f"{p.kind!r} is not one of the five property kinds")

    names = [d.name for d in bundle.risk_domains]
    for d in bundle.risk_domains:
        if not _is_member(DomainName, d.name):
            add(d.id, "invalid domain name", f"{d.name!r} is not one of the nine domain names")
    if len(bundle.risk_domains) != 9 or len({DomainName(n).value for n in names if _is_member(DomainName, n)}) != len(names):
        add("risk_domains", "incomplete domain set", f"expected the nine risk domains exactly once, found {len(names)}")

    for c in bundle.controls:
        if not _is_member(Audience, c.audience):
            add(c.id, "invalid audience", f"{c.audience!r} is not producer or consumer")
        if not _is_member(ControlKind, c.kind):
            add(c.id, "invalid control kind", f"{c.kind!r} is not technical or management")
        if c.risk_domain not in bundle.domain_by_id:
            add(c.id, "dangling reference", f"risk domain {c.risk_domain!r} does not exist")
        if not c.mitigated_vulnerabilities:
            add(c.id, "control mitigates nothing", "mitigated_vulnerabilities must be non-empty")
        for vid in sorted(c.mitigated_vulnerabilities):
            if vid not in bundle.vulnerability_by_id:
                add(c.id, "dangling reference", f"mitigated vulnerability {vid!r} does not exist")

    requirement_actions: set[str] = set()
    for req in bundle.action_asset_requirements:
        if req.action in requirement_actions:
            add(req.action, "duplicate requirement", "an action may have at most one asset requirement entry")
        requirement_actions.add(req.action)
        if req.action not in bundle.action_by_id:
            add(req.action, "dangling reference", "requirement names an unknown action")
        for sub_dimension, asset_ids in req.required_assets.items():
            if not _is_member(SubDimension, sub_dimension):
                add(req.action, "invalid sub-dimension", f"{sub_dimension!r} is not a sub-dimension")
                continue
            sub = SubDimension(sub_dimension)
            for aid in sorted(asset_ids):
                asset = bundle.asset_by_id.get(aid)
                if asset is None:
                    add(req.action, "dangling reference", f"required asset {aid!r} does not exist")
                elif SubDimension(asset.sub_dimension) is not sub:
                    add(req.action, "sub-dimension mismatch", f"asset {aid!r} belongs to {SubDimension(asset.sub_dimension).value}, not {sub.value}")

    mapped_vulns: set[str] = set()
    for vam in bundle.vulnerability_action_maps:
        if vam.vulnerability in mapped_vulns:
            add(vam.vulnerability, "duplicate mapping", "a vulnerability may have at most one action map")
        mapped_vulns.add(vam.vulnerability)
        if vam.vulnerability not in bundle.vulnerability_by_id:
            add(vam.vulnerability, "dangling reference", "action map names an unknown vulnerability")
        for aid in sorted(vam.exploiting_actions):
            if aid not in bundle.action_by_id:
                add(vam.vulnerability, "dangling reference", f"exploiting action {aid!r} does not exist")

    mapped_props: set[str] = set()
    for vpm in bundle.vulnerability_property_maps:
        if vpm.vulnerability in mapped_props:
            add(vpm.vulnerability, "duplicate mapping", "a vulnerability may have at most one property map")
        mapped_props.add(vpm.vulnerability)
        if vpm.vulnerability not in bundle.vulnerability_by_id:
            add(vpm.vulnerability, "dangling reference", "property map names an unknown vulnerability")
        for pid in sorted(vpm.compromised_properties):
            if pid not in bundle.property_by_id:
                add(vpm.vulnerability, "dangling reference", f"compromised property {pid!r} does not exist")

    return ValidationReport(violations=tuple(out))


def lint_taxonomy(bundle: TaxonomyBundle) -> ValidationReport:
    """Completeness lint: flag elements that participate in no mapping.

    Separate from :func:`validate_taxonomy` because a structurally valid bundle
    may still contain orphan elements while being edited.
    """
    out: list[Violation] = []

    used_assets: set[str] = set()
    for req in bundle.action_asset_requirements:
        for asset_ids in req.required_assets.values():
            used_assets.update(asset_ids)
    for a in bundle.assets:
        if a.id not in used_assets:
            out.append(Violation(a.id, "orphan asset", "asset appears in no action requirement"))

    used_actions: set[str] = set()
    for vam in bundle.vulnerability_action_maps:
        used_actions.update(vam.exploiting_actions)
    for act in bundle.actions:
        if act.id not in used_actions:
            out.append(Violation(act.id, "orphan action", "action exploits no vulnerability"))

    used_properties: set[str] = set()
    for vpm in bundle.vulnerability_property_maps:
        used_properties.update(vpm.compromised_properties)
    for p in bundle.properties:
        if p.id not in used_properties:
            out.append(Violation(p.id, "orphan property", "property is compromised by no vulnerability"))

    for v in bundle.vulnerabilities:
        if not bundle.actions_for_vulnerability.get(v.id):
            out.append(Violation(v.id, "unexploitable vulnerability", "no exploiting actions are mapped"))
        if not bundle.properties_for_vulnerability.get(v.id):
            out.append(Violation(v.id, "no compromised properties", "property map is missing or empty"))
        if not bundle.controls_for_vulnerability.get(v.id):
            out.append(Violation(v.id, "unmitigated vulnerability", "no control mitigates this vulnerability"))

    for d in bundle.risk_domains:
        if not bundle.vulnerabilities_by_domain.get(d.id):
            out.append(Violation(d.id, "empty risk domain", "no vulnerability belongs to this domain"))

    return ValidationReport(violations=tuple(out))


def validate_incident_chain(bundle: TaxonomyBundle, chain: IncidentChain) -> ValidationReport:
    """Check that a chain of individual attacks is consistent with the taxonomy.

    Each step's action must be able to exploit its vulnerability, its properties
    must be compromisable by that vulnerability, and every step after the first
    must reuse at least one asset carried forward by an earlier step.
    """
    out: list[Violation] = []

    def add(element_id: str, rule: str, message: str) -> None:
        out.append(Violation(element_id=element_id, rule=rule, message=message))

    if not chain.steps:
        add(chain.name, "empty chain", "an incident chain must contain at least one step")
        return ValidationReport(violations=tuple(out))

    available: set[str] = set()
    for index, step in enumerate(chain.steps):
        where = f"{chain.name}[{index}]"
        action_known = step.action in bundle.action_by_id
        vuln_known = step.vulnerability in bundle.vulnerability_by_id
        if not action_known:
            add(where, "unknown element", f"action {step.action!r} does not exist")
        if not vuln_known:
            add(where, "unknown element", f"vulnerability {step.vulnerability!r} does not exist")

        step_assets: set[str] = set()
        for sub_dimension, aid in step.assets.items():
            if not _is_member(SubDimension, sub_dimension):
                add(where, "invalid sub-dimension", f"{sub_dimension!r} is not a sub-dimension")
                continue
            asset = bundle.asset_by_id.get(aid)
            if asset is None:
                add(where, "unknown element", f"asset {aid!r} does not exist")
                continue
            step_assets.add(aid)
            if SubDimension(asset.sub_dimension) is not SubDimension(sub_dimension):
                add(where, "sub-dimension mismatch", f"asset {aid!r} belongs to {SubDimension(asset.sub_dimension).value}")

        if vuln_known and action_known:
            exploiting = bundle.actions_for_vulnerability.get(step.vulnerability, ())
            if step.action not in exploiting:
                add(where, "action cannot exploit vulnerability", f"{step.action!r} is not mapped to {step.vulnerability!r}")
        if vuln_known:
            compromisable = set(bundle.properties_for_vulnerability.get(step.vulnerability, ()))
            for pid in sorted(step.properties):
                if pid not in bundle.property_by_id:
                    add(where, "unknown element", f"property {pid!r} does not exist")
                elif pid not in compromisable:
                    add(where, "property not compromised by vulnerability", f"{pid!r} is not compromised by {step.vulnerability!r}")

        for aid in sorted(step.carried_forward):
            if aid not in bundle.asset_by_id:
                add(where, "unknown element", f"carried-forward asset {aid!r} does not exist")

        if index > 0 and not (step_assets & available):
            add(where, "step not chained", "no asset of this step was carried forward by an earlier step")

        available.update(step.carried_forward)

    return ValidationReport(violations=tuple(out))


_QUERY_DIMENSIONS = ("assets", "actions", "vulnerabilities", "properties")


def query_taxonomy(bundle: TaxonomyBundle, selector: Mapping[str, object]) -> list:
    """Filter taxonomy elements by dimension and per-dimension attributes.

    With no ``dimension`` key, a bare ``risk_domain`` selector lists that
    domain's vulnerabilities.  Results are sorted lexicographically by id.
    Unknown selector fields raise ``ValueError``.
    """
    selector = dict(selector)
    dimension = selector.pop("dimension", None)
    if dimension is None and "risk_domain" in selector:
        dimension = "vulnerabilities"
    if dimension not in _QUERY_DIMENSIONS:
        raise ValueError(f"unknown dimension {dimension!r}; expected one of {_QUERY_DIMENSIONS}")

    def pick(elements: Iterable, allowed: dict[str, object]) -> list:
        for key in selector:
            if key not in allowed:
                raise ValueError(f"unknown selector field {key!r} for dimension {dimension!r}")
        chosen = []
        for element in elements:
            keep = True
            for key, want in selector.items():
                have = allowed[key](element)
                if isinstance(have, Enum):
                    have = have.value
                if isinstance(want, Enum):
                    want = want.value
                if have != want:
                    keep = False
                    break
            if keep:
                chosen.append(element)
        return sorted(chosen, key=lambda e: e.id)

    if dimension == "assets":
        return pick(bundle.assets, {"sub_dimension": lambda a: a.sub_dimension})
    if dimension == "actions":
        return pick(
            bundle.actions,
            {
                "mechanism_category": lambda a: a.mechanism_category,
                "pattern_category": lambda a: a.pattern_category,
            },
        )
    if dimension == "vulnerabilities":
        return pick(
            bundle.vulnerabilities,
            {
                "category": lambda v: v.category,
                "sub_category": lambda v: v.sub_category,
                "risk_domain": lambda v: v.risk_domain,
            },
        )
    return pick(bundle.properties, {"kind": lambda p: p.kind})
