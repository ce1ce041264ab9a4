"""Taxonomy-driven quantitative IoT risk and maturity assessment."""

from .assessment import AssessmentBundle, AssessmentReport, Organization, compute_report, validate_assessment
from .errors import (
    DegenerateAssessmentError,
    DocumentError,
    DocumentValidationError,
    EngineError,
    IncompleteAssessmentError,
    NoExploitPathWarning,
    ParseError,
    ProbabilityRangeError,
    SchemaVersionError,
    UnknownIdError,
    ValidationIssue,
)
from .maturity import (
    IMPLEMENTATION_LADDER,
    ControlScores,
    MaturityResult,
    implementation_from_level,
    maturity_score,
    mitigation,
    residual_risk,
)
from .risk import (
    DomainRiskReport,
    ImpactWeights,
    PrevalencyScores,
    RiskScale,
    ThreatActorProfile,
    VulnerabilityRiskPoint,
    action_asset_likelihood,
    asset_subdimension_likelihood,
    inherent_risk,
    normalization_denominator,
    normalize,
    risk_matrix,
    union_probability,
    vulnerability_actor_likelihood,
    vulnerability_impact,
    vulnerability_impact_ceiling,
    vulnerability_likelihood,
)
from .sensitivity import (
    ControlSensitivity,
    SensitivityConfig,
    SensitivityResult,
    SensitivityScore,
    WhatIfScenario,
    apply_what_if,
    sensitivity_analysis,
)
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
    ValidationReport,
    Violation,
    VulnerabilityActionMap,
    VulnerabilityCategory,
    VulnerabilityElement,
    VulnerabilityPropertyMap,
    lint_taxonomy,
    query_taxonomy,
    validate_incident_chain,
    validate_taxonomy,
)

__version__ = "0.1.0"
