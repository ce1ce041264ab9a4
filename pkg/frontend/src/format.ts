/** Display formatting, aligned with the CLI's table conventions. */

export function fmt4(value: number): string {
  return value.toFixed(4);
}

export function domainLabel(name: string): string {
  return name.replace(/_/g, " ");
}

export function shortControlLabel(id: string): string {
  // "ctrl.consumer.systems.device-hardening" -> "consumer / device-hardening"
  const parts = id.split(".");
  if (parts.length >= 4) {
    return `${parts[1]} / ${parts.slice(3).join(".")}`;
  }
  return id;
}

/** The five questionnaire answers and the implementation score each maps to. */
export const QUESTIONNAIRE_LEVELS: ReadonlyArray<{ value: number; label: string }> = [
  { value: 0.0, label: "Not implemented" },
  { value: 0.25, label: "Initial" },
  { value: 0.5, label: "Defined" },
  { value: 0.75, label: "Managed" },
  { value: 1.0, label: "Optimized" },
];

export function clamp01(value: number): number {
  return Math.min(1, Math.max(0, value));
}
