/** Typed client for the assessment service. All risk numbers come from here. */

import type {
  AssessmentDoc,
  ErrorDoc,
  ReportDoc,
  SensitivityResponseDoc,
  TaxonomyDoc,
  ThreatActorDoc,
  ValidationDetail,
  WhatIfResponseDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
    readonly details: ValidationDetail[],
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await response.text();
    const parsed = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const error = (parsed ?? {}) as Partial<ErrorDoc>;
      throw new ApiError(
        response.status,
        error.code ?? "http_error",
        error.message ?? response.statusText,
        error.details ?? [],
      );
    }
    return parsed as T;
  }

  health(): Promise<{ status: string; taxonomy_version: string }> {
    return this.request("GET", "/health");
  }

  taxonomy(): Promise<TaxonomyDoc> {
    return this.request("GET", "/taxonomy");
  }

  threatActorPresets(): Promise<{ threat_actors: ThreatActorDoc[] }> {
    return this.request("GET", "/threat-actor-presets");
  }

  listAssessments(): Promise<{ assessments: string[] }> {
    return this.request("GET", "/assessments");
  }

  createAssessment(doc: AssessmentDoc): Promise<{ id: string }> {
    return this.request("POST", "/assessments", doc);
  }

  getAssessment(id: string): Promise<AssessmentDoc> {
    return this.request("GET", `/assessments/${id}`);
  }

  patchControlScores(
    id: string,
    body: { implementation?: Record<string, number>; effectiveness?: Record<string, number> },
  ): Promise<{ id: string; dirty: boolean }> {
    return this.request("PATCH", `/assessments/${id}/control-scores`, body);
  }

  patchPrevalency(id: string, scores: Record<string, number>): Promise<{ id: string; dirty: boolean }> {
    return this.request("PATCH", `/assessments/${id}/prevalency`, { scores });
  }

  patchImpacts(
    id: string,
    body: { weights?: Record<string, number>; max_weight?: number },
  ): Promise<{ id: string; dirty: boolean }> {
    return this.request("PATCH", `/assessments/${id}/impacts`, body);
  }

  patchThreatActors(id: string, actors: ThreatActorDoc[]): Promise<{ id: string; dirty: boolean }> {
    return this.request("PATCH", `/assessments/${id}/threat-actors`, { actors });
  }

  compute(id: string): Promise<ReportDoc> {
    return this.request("POST", `/assessments/${id}/compute`);
  }

  report(id: string): Promise<ReportDoc> {
    return this.request("GET", `/assessments/${id}/report`);
  }

  sensitivity(id: string, params?: { delta?: number; top?: number }): Promise<SensitivityResponseDoc> {
    const query = new URLSearchParams();
    if (params?.delta !== undefined) query.set("delta", String(params.delta));
    if (params?.top !== undefined) query.set("top", String(params.top));
    const suffix = query.toString() ? `?${query}` : "";
    return this.request("GET", `/assessments/${id}/sensitivity${suffix}`);
  }

  whatIf(id: string, uplifts: Record<string, number>, label = ""): Promise<WhatIfResponseDoc> {
    return this.request("POST", `/assessments/${id}/what-if`, { uplifts, label });
  }
}
