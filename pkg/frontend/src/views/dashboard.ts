/** Dashboard: paired domain bars, the vulnerability risk matrix, top controls. */

import { domainBarRows, domainBarsSvg, riskMatrixSvg, topControlRows, topControlsSvg, scatterRows } from "../charts.js";
import type { AppContext } from "../context.js";

export function renderDashboard(container: HTMLElement, ctx: AppContext, refresh: () => void): void {
  const { session } = ctx;

  if (!session.canRenderReport) {
    const reason = session.hasPendingEdits
      ? "There are unsaved edits."
      : "Inputs changed since the last computation.";
    container.innerHTML = `
      <section class="empty">
        <p>${reason} The dashboard only shows results that match the current inputs.</p>
        <button id="dashboard-compute" class="primary">Compute now</button>
      </section>`;
    container.querySelector("#dashboard-compute")?.addEventListener("click", async () => {
      await session.compute();
      refresh();
    });
    return;
  }

  const report = session.report!;
  const scaleMax = session.bundle?.scale.r_max ?? 100;
  const bars = domainBarRows(report, ctx.domainNames);
  const points = scatterRows(report);
  const top = topControlRows(report);

  container.innerHTML = `
    <section>
      <h2>Risk per domain</h2>
      <p class="muted">
        inherent <span class="swatch inherent"></span> vs residual <span class="swatch residual"></span>,
        normalized to ${session.bundle?.scale.r_min ?? 0}..${scaleMax} ·
        computed ${report.generated_at}
      </p>
      ${domainBarsSvg(bars, scaleMax)}

      <h2>Vulnerability risk matrix</h2>
      <p class="muted">${points.length} vulnerabilities present in the estate</p>
      ${riskMatrixSvg(points)}

      <h2>Top ${top.length} controls by residual-risk reduction</h2>
      <p class="muted">one-at-a-time uplift of +${report.sensitivity.delta} implementation</p>
      ${topControlsSvg(top)}
    </section>`;
}
