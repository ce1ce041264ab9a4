/** Client-side session state for one assessment.
 *
 * Edits are staged in a local buffer and flushed to PATCH endpoints before any
 * compute request. The dirty flag mirrors the server's: the UI refuses to
 * render a report while edits are pending or the server reports staleness.
 */

import { ApiClient, ApiError } from "./api.js";
import { clamp01 } from "./format.js";
import type {
  AssessmentDoc,
  ReportDoc,
  ThreatActorDoc,
  ValidationDetail,
  WhatIfResponseDoc,
} from "./types.js";

export interface PendingScenario {
  uplifts: Record<string, number>;
  response: WhatIfResponseDoc;
}

export class UiSession {
  bundle: AssessmentDoc | null = null;
  report: ReportDoc | null = null;
  dirty = true;
  errors: ValidationDetail[] = [];
  pendingScenario: PendingScenario | null = null;

  private pendingImplementation: Record<string, number> = {};
  private pendingEffectiveness: Record<string, number> = {};
  private pendingPrevalency: Record<string, number> = {};
  private pendingWeights: Record<string, number> = {};
  private pendingActors: ThreatActorDoc[] | null = null;

  constructor(
    private readonly api: ApiClient,
    readonly assessmentId: string,
  ) {}

  get hasPendingEdits(): boolean {
    return (
      this.pendingActors !== null ||
      Object.keys(this.pendingImplementation).length > 0 ||
      Object.keys(this.pendingEffectiveness).length > 0 ||
      Object.keys(this.pendingPrevalency).length > 0 ||
      Object.keys(this.pendingWeights).length > 0
    );
  }

  /** True only when the report on hand matches the server's current inputs. */
  get canRenderReport(): boolean {
    return !this.dirty && !this.hasPendingEdits && this.report !== null;
  }

  async load(): Promise<AssessmentDoc> {
    this.bundle = await this.api.getAssessment(this.assessmentId);
    return this.bundle;
  }

  stageControlScore(controlId: string, implementation: number): void {
    this.pendingImplementation[controlId] = clamp01(implementation);
  }

  stageEffectiveness(controlId: string, effectiveness: number): void {
    this.pendingEffectiveness[controlId] = clamp01(effectiveness);
  }

  stagePrevalency(vulnerabilityId: string, score: number): void {
    this.pendingPrevalency[vulnerabilityId] = clamp01(score);
  }

  stageImpactWeight(propertyId: string, weight: number): void {
    this.pendingWeights[propertyId] = weight;
  }

  stageActorSelection(actors: ThreatActorDoc[]): void {
    this.pendingActors = actors;
  }

  discardEdits(): void {
    this.pendingImplementation = {};
    this.pendingEffectiveness = {};
    this.pendingPrevalency = {};
    this.pendingWeights = {};
    this.pendingActors = null;
    this.errors = [];
  }

  /** Push every staged edit to the server. Returns false (keeping the buffer
   * and recording field-level errors) when the server rejects an edit. */
  async flush(): Promise<boolean> {
    this.errors = [];
    try {
      if (this.pendingActors !== null) {
        await this.api.patchThreatActors(this.assessmentId, this.pendingActors);
        this.pendingActors = null;
        this.dirty = true;
      }
      if (Object.keys(this.pendingPrevalency).length > 0) {
        await this.api.patchPrevalency(this.assessmentId, this.pendingPrevalency);
        this.pendingPrevalency = {};
        this.dirty = true;
      }
      if (Object.keys(this.pendingWeights).length > 0) {
        await this.api.patchImpacts(this.assessmentId, { weights: this.pendingWeights });
        this.pendingWeights = {};
        this.dirty = true;
      }
      if (
        Object.keys(this.pendingImplementation).length > 0 ||
        Object.keys(this.pendingEffectiveness).length > 0
      ) {
        const body: { implementation?: Record<string, number>; effectiveness?: Record<string, number> } = {};
        if (Object.keys(this.pendingImplementation).length > 0) {
          body.implementation = this.pendingImplementation;
        }
        if (Object.keys(this.pendingEffectiveness).length > 0) {
          body.effectiveness = this.pendingEffectiveness;
        }
        await this.api.patchControlScores(this.assessmentId, body);
        this.pendingImplementation = {};
        this.pendingEffectiveness = {};
        this.dirty = true;
      }
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        this.errors = error.details.length > 0 ? error.details : [{ path: "", message: error.message }];
        return false;
      }
      throw error;
    }
    this.bundle = await this.api.getAssessment(this.assessmentId);
    return true;
  }

  /** Flush staged edits, then recompute. Returns null when validation blocks the flush. */
  async compute(): Promise<ReportDoc | null> {
    const flushed = await this.flush();
    if (!flushed) {
      return null;
    }
    this.report = await this.api.compute(this.assessmentId);
    this.dirty = false;
    return this.report;
  }

  /** Fetch the stored report; a stale (409) answer leaves the session dirty. */
  async fetchReport(): Promise<ReportDoc | null> {
    try {
      this.report = await this.api.report(this.assessmentId);
      this.dirty = false;
      return this.report;
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.dirty = true;
        return null;
      }
      throw error;
    }
  }

  /** Evaluate a scenario server-side without touching stored state. */
  async exploreWhatIf(uplifts: Record<string, number>, label = ""): Promise<WhatIfResponseDoc> {
    const response = await this.api.whatIf(this.assessmentId, uplifts, label);
    this.pendingScenario = { uplifts: { ...uplifts }, response };
    return response;
  }

  /** Turn the pending scenario's uplifts into real control-score edits and recompute. */
  async adoptScenario(): Promise<ReportDoc | null> {
    if (this.pendingScenario === null || this.bundle === null) {
      return null;
    }
    const implementation = this.bundle.control_scores.implementation;
    for (const [controlId, uplift] of Object.entries(this.pendingScenario.uplifts)) {
      if (uplift === 0) {
        continue;
      }
      const current = implementation[controlId] ?? 0;
      this.stageControlScore(controlId, current + uplift);
    }
    this.pendingScenario = null;
    return this.compute();
  }
}
