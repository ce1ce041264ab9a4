/** Wire types mirroring the server's JSON document schemas. */

export interface RiskDomainDoc {
  id: string;
  name: string;
}

export interface TaxonomyDoc {
  schema_version: string;
  version: string;
  risk_domains: RiskDomainDoc[];
  assets: { id: string; sub_dimension: string; label: string }[];
  actions: {
    id: string;
    mechanism_category: string;
    pattern_category: string;
    pattern: string;
    label: string;
  }[];
  vulnerabilities: {
    id: string;
    category: string;
    sub_category: string;
    label: string;
    risk_domain: string | null;
  }[];
  properties: { id: string; kind: string; label: string }[];
  controls: {
    id: string;
    risk_domain: string;
    audience: "producer" | "consumer";
    kind: "technical" | "management";
    label: string;
    mitigated_vulnerabilities: string[];
  }[];
  action_asset_requirements: { action: string; required_assets: Record<string, string[]> }[];
  vulnerability_action_maps: { vulnerability: string; exploiting_actions: string[] }[];
  vulnerability_property_maps: { vulnerability: string; compromised_properties: string[] }[];
}

export interface ThreatActorDoc {
  id: string;
  label: string;
  asset_likelihoods: Record<string, number>;
  action_likelihoods: Record<string, number>;
}

export interface AssessmentDoc {
  schema_version: string;
  id: string;
  organization: { name: string; roles: string[] };
  taxonomy_ref: string;
  threat_actors: ThreatActorDoc[];
  prevalency: { scores: Record<string, number> };
  impacts: { weights: Record<string, number>; max_weight: number };
  control_scores: {
    implementation: Record<string, number>;
    effectiveness: Record<string, number>;
  };
  scale: { r_min: number; r_max: number };
  sensitivity: { delta: number; top_n: number };
}

export interface DomainReportDoc {
  risk_domain: string;
  inherent_raw: number;
  inherent_normalized: number;
  residual_raw: number;
  residual_normalized: number;
}

export interface RiskPointDoc {
  vulnerability: string;
  likelihood: number;
  impact: number;
}

export interface SensitivityEntryDoc {
  control: string;
  delta_residual_normalized: number;
}

export interface ReportDoc {
  schema_version: string;
  assessment_id: string;
  generated_at: string;
  taxonomy_version: string;
  domain_reports: DomainReportDoc[];
  risk_matrix: RiskPointDoc[];
  sensitivity: {
    delta: number;
    top_n: number;
    per_domain: Record<string, SensitivityEntryDoc[]>;
    overall: SensitivityEntryDoc[];
  };
}

export interface SensitivityResponseDoc {
  delta: number;
  top_n: number;
  per_domain: Record<string, SensitivityEntryDoc[]>;
  overall: SensitivityEntryDoc[];
}

export interface WhatIfResponseDoc {
  label: string;
  uplifts: Record<string, number>;
  domain_reports: DomainReportDoc[];
}

export interface ValidationDetail {
  path: string;
  message: string;
}

export interface ErrorDoc {
  code: string;
  message: string;
  details: ValidationDetail[];
}
