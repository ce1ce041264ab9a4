/** Chart data extraction and SVG rendering.
 *
 * The row extractors mirror the server's chart exports one to one (same rows,
 * same order, same values), so what the dashboard draws is exactly what
 * `export --view ...` writes. The SVG builders are pure string functions.
 */

import { domainLabel, fmt4, shortControlLabel } from "./format.js";
import type { DomainReportDoc, ReportDoc, RiskPointDoc, SensitivityEntryDoc } from "./types.js";

export interface DomainBarRow {
  domain: string;
  name: string;
  inherent: number;
  residual: number;
}

export function domainBarRows(report: ReportDoc, domainNames: Map<string, string>): DomainBarRow[] {
  return report.domain_reports.map((d) => ({
    domain: d.risk_domain,
    name: domainNames.get(d.risk_domain) ?? d.risk_domain,
    inherent: d.inherent_normalized,
    residual: d.residual_normalized,
  }));
}

export function scatterRows(report: ReportDoc): RiskPointDoc[] {
  return report.risk_matrix.slice();
}

export function topControlRows(report: ReportDoc): SensitivityEntryDoc[] {
  return report.sensitivity.overall.slice(0, report.sensitivity.top_n);
}

function esc(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const BAR_COLORS = { inherent: "#c0504d", residual: "#4f81bd", scenario: "#9bbb59" };

/** Paired inherent/residual bars per risk domain. */
export function domainBarsSvg(rows: DomainBarRow[], scaleMax: number, width = 860, height = 340): string {
  const margin = { top: 16, right: 12, bottom: 112, left: 44 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;
  const group = plotW / Math.max(rows.length, 1);
  const bar = Math.min(26, group * 0.36);
  const y = (v: number) => margin.top + plotH - (v / scaleMax) * plotH;

  const parts: string[] = [];
  parts.push(`<line x1="${margin.left}" y1="${margin.top + plotH}" x2="${width - margin.right}" y2="${margin.top + plotH}" class="axis"/>`);
  for (const tick of [0, 0.25, 0.5, 0.75, 1]) {
    const value = tick * scaleMax;
    parts.push(`<text x="${margin.left - 6}" y="${y(value) + 4}" class="tick" text-anchor="end">${fmt4(value).replace(/\.?0+$/, "") || "0"}</text>`);
    parts.push(`<line x1="${margin.left}" y1="${y(value)}" x2="${width - margin.right}" y2="${y(value)}" class="grid"/>`);
  }
  rows.forEach((row, index) => {
    const cx = margin.left + group * index + group / 2;
    const inherentY = y(row.inherent);
    const residualY = y(row.residual);
    parts.push(
      `<rect x="${cx - bar - 1}" y="${inherentY}" width="${bar}" height="${margin.top + plotH - inherentY}" fill="${BAR_COLORS.inherent}"><title>${esc(row.name)} inherent ${fmt4(row.inherent)}</title></rect>`,
      `<rect x="${cx + 1}" y="${residualY}" width="${bar}" height="${margin.top + plotH - residualY}" fill="${BAR_COLORS.residual}"><title>${esc(row.name)} residual ${fmt4(row.residual)}</title></rect>`,
      `<text x="${cx}" y="${margin.top + plotH + 10}" class="label" transform="rotate(-38 ${cx} ${margin.top + plotH + 10})" text-anchor="end">${esc(domainLabel(row.name))}</text>`,
    );
  });
  return `<svg viewBox="0 0 ${width} ${height}" role="img">${parts.join("")}</svg>`;
}

/** Likelihood x impact scatter of every vulnerability present in the estate. */
export function riskMatrixSvg(points: RiskPointDoc[], width = 640, height = 360): string {
  const margin = { top: 14, right: 16, bottom: 40, left: 44 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;
  const maxImpact = Math.max(1, ...points.map((p) => p.impact));
  const x = (likelihood: number) => margin.left + likelihood * plotW;
  const y = (impact: number) => margin.top + plotH - (impact / maxImpact) * plotH;

  const parts: string[] = [];
  parts.push(`<line x1="${margin.left}" y1="${margin.top + plotH}" x2="${width - margin.right}" y2="${margin.top + plotH}" class="axis"/>`);
  parts.push(`<line x1="${margin.left}" y1="${margin.top}" x2="${margin.left}" y2="${margin.top + plotH}" class="axis"/>`);
  for (const tick of [0, 0.25, 0.5, 0.75, 1]) {
    parts.push(`<text x="${x(tick)}" y="${margin.top + plotH + 16}" class="tick" text-anchor="middle">${tick}</text>`);
  }
  parts.push(`<text x="${width / 2}" y="${height - 6}" class="label" text-anchor="middle">likelihood</text>`);
  parts.push(`<text x="12" y="${margin.top + plotH / 2}" class="label" transform="rotate(-90 12 ${margin.top + plotH / 2})" text-anchor="middle">impact</text>`);
  for (const point of points) {
    parts.push(
      `<circle cx="${x(point.likelihood)}" cy="${y(point.impact)}" r="5" class="dot"><title>${esc(point.vulnerability)}: L=${fmt4(point.likelihood)} I=${fmt4(point.impact)}</title></circle>`,
    );
  }
  return `<svg viewBox="0 0 ${width} ${height}" role="img">${parts.join("")}</svg>`;
}

/** Horizontal top-N bars for control sensitivities. */
export function topControlsSvg(entries: SensitivityEntryDoc[], width = 640, rowHeight = 26): string {
  const margin = { top: 8, right: 70, bottom: 8, left: 280 };
  const height = margin.top + margin.bottom + rowHeight * entries.length;
  const plotW = width - margin.left - margin.right;
  const maxDelta = Math.max(1e-12, ...entries.map((e) => e.delta_residual_normalized));

  const parts: string[] = [];
  entries.forEach((entry, index) => {
    const top = margin.top + rowHeight * index;
    const barW = (entry.delta_residual_normalized / maxDelta) * plotW;
    parts.push(
      `<text x="${margin.left - 8}" y="${top + rowHeight / 2 + 4}" class="label" text-anchor="end">${esc(shortControlLabel(entry.control))}</text>`,
      `<rect x="${margin.left}" y="${top + 4}" width="${Math.max(barW, 1)}" height="${rowHeight - 8}" fill="${BAR_COLORS.residual}"><title>${esc(entry.control)}</title></rect>`,
      `<text x="${margin.left + Math.max(barW, 1) + 6}" y="${top + rowHeight / 2 + 4}" class="tick">${fmt4(entry.delta_residual_normalized)}</text>`,
    );
  });
  return `<svg viewBox="0 0 ${width} ${height}" role="img">${parts.join("")}</svg>`;
}

export interface ComparisonRow {
  name: string;
  baseline: number;
  scenario: number;
}

export function comparisonRows(
  baseline: DomainReportDoc[],
  scenario: DomainReportDoc[],
  domainNames: Map<string, string>,
): ComparisonRow[] {
  const scenarioByDomain = new Map(scenario.map((d) => [d.risk_domain, d]));
  return baseline.map((d) => ({
    name: domainNames.get(d.risk_domain) ?? d.risk_domain,
    baseline: d.residual_normalized,
    scenario: scenarioByDomain.get(d.risk_domain)?.residual_normalized ?? d.residual_normalized,
  }));
}

/** Side-by-side baseline vs scenario residual bars. */
export function comparisonBarsSvg(rows: ComparisonRow[], scaleMax: number, width = 860, height = 340): string {
  const margin = { top: 16, right: 12, bottom: 112, left: 44 };
  const plotW = width - margin.left - margin.right;
  const plotH = height - margin.top - margin.bottom;
  const group = plotW / Math.max(rows.length, 1);
  const bar = Math.min(26, group * 0.36);
  const y = (v: number) => margin.top + plotH - (v / scaleMax) * plotH;

  const parts: string[] = [];
  parts.push(`<line x1="${margin.left}" y1="${margin.top + plotH}" x2="${width - margin.right}" y2="${margin.top + plotH}" class="axis"/>`);
  rows.forEach((row, index) => {
    const cx = margin.left + group * index + group / 2;
    const baseY = y(row.baseline);
    const scenarioY = y(row.scenario);
    parts.push(
      `<rect x="${cx - bar - 1}" y="${baseY}" width="${bar}" height="${margin.top + plotH - baseY}" fill="${BAR_COLORS.residual}"><title>${esc(row.name)} baseline ${fmt4(row.baseline)}</title></rect>`,
      `<rect x="${cx + 1}" y="${scenarioY}" width="${bar}" height="${margin.top + plotH - scenarioY}" fill="${BAR_COLORS.scenario}"><title>${esc(row.name)} scenario ${fmt4(row.scenario)}</title></rect>`,
      `<text x="${cx}" y="${margin.top + plotH + 10}" class="label" transform="rotate(-38 ${cx} ${margin.top + plotH + 10})" text-anchor="end">${esc(domainLabel(row.name))}</text>`,
    );
  });
  return `<svg viewBox="0 0 ${width} ${height}" role="img">${parts.join("")}</svg>`;
}
