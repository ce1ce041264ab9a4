/** Identify screen: threat actors, prevalency, impact weights, maturity questionnaire. */

import { domainLabel, QUESTIONNAIRE_LEVELS } from "../format.js";
import type { AppContext } from "../context.js";
import type { ThreatActorDoc, ValidationDetail } from "../types.js";

function nearestLevel(value: number): number {
  let best = 0;
  for (const [index, level] of QUESTIONNAIRE_LEVELS.entries()) {
    if (Math.abs(level.value - value) < Math.abs((QUESTIONNAIRE_LEVELS[best]?.value ?? 0) - value)) {
      best = index;
    }
  }
  return best;
}

function errorsFor(errors: ValidationDetail[], needle: string): ValidationDetail[] {
  return errors.filter((e) => e.path.includes(needle));
}

function inlineErrors(errors: ValidationDetail[]): string {
  if (errors.length === 0) {
    return "";
  }
  return `<span class="field-error">${errors.map((e) => e.message).join("; ")}</span>`;
}

export function renderIdentify(container: HTMLElement, ctx: AppContext, refresh: () => void): void {
  const { session, taxonomy } = ctx;
  const bundle = session.bundle;
  if (!bundle) {
    container.innerHTML = "<p>loading assessment...</p>";
    return;
  }

  const selectedActorIds = new Set(bundle.threat_actors.map((a) => a.id));
  const actorCatalog = new Map<string, ThreatActorDoc>();
  for (const actor of ctx.presets) {
    actorCatalog.set(actor.id, actor);
  }
  for (const actor of bundle.threat_actors) {
    actorCatalog.set(actor.id, actor);
  }

  const generalErrors = session.errors.filter((e) => !e.path);
  const actorErrors = errorsFor(session.errors, "threat_actors").concat(
    session.errors.filter((e) => e.path === "actors"),
  );

  const actorBoxes = [...actorCatalog.values()]
    .map(
      (actor) => `
      <label class="check">
        <input type="checkbox" data-actor="${actor.id}" ${selectedActorIds.has(actor.id) ? "checked" : ""}/>
        ${actor.label}
      </label>`,
    )
    .join("");

  const weightInputs = taxonomy.properties
    .map((property) => {
      const value = bundle.impacts.weights[property.id] ?? 0;
      const fieldErrors = errorsFor(session.errors, `impacts.weights[${property.id}]`);
      return `
      <label class="field ${fieldErrors.length ? "invalid" : ""}">
        <span>${property.label}</span>
        <input type="number" min="0" max="${bundle.impacts.max_weight}" step="0.5"
               data-weight="${property.id}" value="${value}"/>
        ${inlineErrors(fieldErrors)}
      </label>`;
    })
    .join("");

  const domainName = new Map(taxonomy.risk_domains.map((d) => [d.id, domainLabel(d.name)]));
  const vulnerabilityRows = taxonomy.vulnerabilities
    .map((vulnerability) => {
      const value = bundle.prevalency.scores[vulnerability.id] ?? 0;
      const fieldErrors = errorsFor(session.errors, `prevalency.scores[${vulnerability.id}]`);
      return `
      <tr class="${fieldErrors.length ? "invalid" : ""}">
        <td>${vulnerability.label}</td>
        <td class="muted">${domainName.get(vulnerability.risk_domain ?? "") ?? ""}</td>
        <td><input type="range" min="0" max="1" step="0.05" data-prevalency="${vulnerability.id}" value="${value}"/>
            <span class="value" data-prevalency-value="${vulnerability.id}">${value.toFixed(2)}</span>
            ${inlineErrors(fieldErrors)}</td>
      </tr>`;
    })
    .join("");

  const roleSet = new Set(bundle.organization.roles);
  const questionnaire = taxonomy.risk_domains
    .map((domain) => {
      const controls = taxonomy.controls.filter(
        (c) => c.risk_domain === domain.id && roleSet.has(c.audience),
      );
      if (controls.length === 0) {
        return "";
      }
      const rows = controls
        .map((control) => {
          const value = bundle.control_scores.implementation[control.id] ?? 0;
          const effectiveness = bundle.control_scores.effectiveness[control.id] ?? 0;
          const fieldErrors = errorsFor(session.errors, `[${control.id}]`);
          const options = QUESTIONNAIRE_LEVELS.map(
            (level, index) =>
              `<option value="${index}" ${nearestLevel(value) === index ? "selected" : ""}>${level.label}</option>`,
          ).join("");
          return `
          <tr class="${fieldErrors.length ? "invalid" : ""}">
            <td>${control.label}<div class="muted">${control.audience} / ${control.kind}</div></td>
            <td><select data-control="${control.id}">${options}</select>${inlineErrors(fieldErrors)}</td>
            <td class="muted">effectiveness ${effectiveness.toFixed(2)}</td>
          </tr>`;
        })
        .join("");
      return `<h3>${domainLabel(domain.name)}</h3><table class="grid">${rows}</table>`;
    })
    .join("");

  container.innerHTML = `
    <section>
      <h2>${bundle.organization.name}</h2>
      <p class="muted">roles: ${bundle.organization.roles.join(", ")} · taxonomy ${bundle.taxonomy_ref}</p>
      ${generalErrors.length ? `<div class="banner error">${generalErrors.map((e) => e.message).join("; ")}</div>` : ""}
      ${session.hasPendingEdits ? `<div class="banner">unsaved edits - save or compute to apply</div>` : ""}

      <h3>Threat actors</h3>
      ${actorErrors.length ? `<div class="banner error">${actorErrors.map((e) => e.message).join("; ")}</div>` : ""}
      <div class="actor-grid">${actorBoxes}</div>

      <h3>Impact weights (per compromised property, max ${bundle.impacts.max_weight})</h3>
      <div class="weights">${weightInputs}</div>

      <h3>Vulnerability prevalency</h3>
      <table class="grid">${vulnerabilityRows}</table>

      <h3>Maturity questionnaire</h3>
      <p class="muted">How well is each control implemented? Answers map onto the five-level ladder.</p>
      ${questionnaire}

      <div class="actions">
        <button id="identify-save">Save changes</button>
        <button id="identify-compute" class="primary">Save &amp; compute</button>
      </div>
    </section>`;

  for (const input of container.querySelectorAll<HTMLInputElement>("input[data-actor]")) {
    input.addEventListener("change", () => {
      const chosen: ThreatActorDoc[] = [];
      for (const box of container.querySelectorAll<HTMLInputElement>("input[data-actor]")) {
        const actor = actorCatalog.get(box.dataset.actor ?? "");
        if (box.checked && actor) {
          chosen.push(actor);
        }
      }
      session.stageActorSelection(chosen);
    });
  }
  for (const input of container.querySelectorAll<HTMLInputElement>("input[data-weight]")) {
    input.addEventListener("change", () => {
      session.stageImpactWeight(input.dataset.weight ?? "", Number(input.value));
    });
  }
  for (const input of container.querySelectorAll<HTMLInputElement>("input[data-prevalency]")) {
    input.addEventListener("input", () => {
      const vulnerabilityId = input.dataset.prevalency ?? "";
      session.stagePrevalency(vulnerabilityId, Number(input.value));
      const label = container.querySelector(`[data-prevalency-value="${vulnerabilityId}"]`);
      if (label) {
        label.textContent = Number(input.value).toFixed(2);
      }
    });
  }
  for (const select of container.querySelectorAll<HTMLSelectElement>("select[data-control]")) {
    select.addEventListener("change", () => {
      const level = QUESTIONNAIRE_LEVELS[Number(select.value)];
      if (level) {
        session.stageControlScore(select.dataset.control ?? "", level.value);
      }
    });
  }

  container.querySelector("#identify-save")?.addEventListener("click", async () => {
    await session.flush();
    refresh();
  });
  container.querySelector("#identify-compute")?.addEventListener("click", async () => {
    await session.compute();
    refresh();
  });
}
