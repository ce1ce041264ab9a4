/** What-if screen: per-control uplift sliders, live side-by-side comparison, adopt. */

import { comparisonBarsSvg, comparisonRows } from "../charts.js";
import { domainLabel, fmt4, shortControlLabel } from "../format.js";
import type { AppContext } from "../context.js";

const staged = new Map<string, number>();

export function renderWhatIf(container: HTMLElement, ctx: AppContext, refresh: () => void): void {
  const { session, taxonomy } = ctx;

  if (!session.canRenderReport || !session.bundle) {
    container.innerHTML = `
      <section class="empty">
        <p>Compute a baseline first; what-if scenarios compare against the current report.</p>
        <button id="whatif-compute" class="primary">Compute baseline</button>
      </section>`;
    container.querySelector("#whatif-compute")?.addEventListener("click", async () => {
      await session.compute();
      refresh();
    });
    return;
  }

  const bundle = session.bundle;
  const report = session.report!;
  const roleSet = new Set(bundle.organization.roles);
  const scenario = session.pendingScenario;

  const sliderGroups = taxonomy.risk_domains
    .map((domain) => {
      const controls = taxonomy.controls.filter(
        (c) => c.risk_domain === domain.id && roleSet.has(c.audience),
      );
      if (controls.length === 0) {
        return "";
      }
      const rows = controls
        .map((control) => {
          const current = bundle.control_scores.implementation[control.id] ?? 0;
          const uplift = staged.get(control.id) ?? 0;
          return `
          <tr>
            <td>${shortControlLabel(control.id)}<div class="muted">now at ${current.toFixed(2)}</div></td>
            <td>
              <input type="range" min="0" max="1" step="0.05" value="${uplift}" data-uplift="${control.id}"/>
              <span class="value" data-uplift-value="${control.id}">+${uplift.toFixed(2)}</span>
            </td>
          </tr>`;
        })
        .join("");
      return `<details ${staged.size ? "" : "open"}><summary>${domainLabel(domain.name)}</summary><table class="grid">${rows}</table></details>`;
    })
    .join("");

  const comparison = scenario
    ? comparisonRows(report.domain_reports, scenario.response.domain_reports, ctx.domainNames)
    : null;
  const comparisonBlock = comparison
    ? `
      <h2>Baseline vs scenario residual risk</h2>
      <p class="muted">baseline <span class="swatch residual"></span> vs scenario <span class="swatch scenario"></span></p>
      ${comparisonBarsSvg(comparison, bundle.scale.r_max)}
      <table class="grid">
        <tr><th>risk domain</th><th>baseline</th><th>scenario</th></tr>
        ${comparison
          .map(
            (row) =>
              `<tr><td>${domainLabel(row.name)}</td><td>${fmt4(row.baseline)}</td><td>${fmt4(row.scenario)}</td></tr>`,
          )
          .join("")}
      </table>
      <div class="actions">
        <button id="whatif-adopt" class="primary">Adopt scenario (apply uplifts for real)</button>
        <button id="whatif-clear">Clear scenario</button>
      </div>`
    : `<p class="muted">Move a slider to evaluate a scenario. Nothing is stored until you adopt it.</p>`;

  container.innerHTML = `
    <section>
      <h2>Control uplifts</h2>
      ${sliderGroups}
      ${comparisonBlock}
    </section>`;

  const evaluate = async () => {
    const uplifts: Record<string, number> = {};
    for (const [controlId, uplift] of staged) {
      if (uplift > 0) {
        uplifts[controlId] = uplift;
      }
    }
    if (Object.keys(uplifts).length === 0) {
      session.pendingScenario = null;
    } else {
      await session.exploreWhatIf(uplifts, "interactive scenario");
    }
    refresh();
  };

  for (const input of container.querySelectorAll<HTMLInputElement>("input[data-uplift]")) {
    input.addEventListener("input", () => {
      const controlId = input.dataset.uplift ?? "";
      staged.set(controlId, Number(input.value));
      const label = container.querySelector(`[data-uplift-value="${controlId}"]`);
      if (label) {
        label.textContent = `+${Number(input.value).toFixed(2)}`;
      }
    });
    input.addEventListener("change", evaluate);
  }

  container.querySelector("#whatif-adopt")?.addEventListener("click", async () => {
    await session.adoptScenario();
    staged.clear();
    refresh();
  });
  container.querySelector("#whatif-clear")?.addEventListener("click", () => {
    staged.clear();
    session.pendingScenario = null;
    refresh();
  });
}
