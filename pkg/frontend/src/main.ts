/** App shell: assessment picker, tab navigation, session lifecycle. */

import { ApiClient, ApiError } from "./api.js";
import type { AppContext } from "./context.js";
import { UiSession } from "./state.js";
import { renderDashboard } from "./views/dashboard.js";
import { renderIdentify } from "./views/identify.js";
import { renderWhatIf } from "./views/whatif.js";

type Tab = "identify" | "dashboard" | "whatif";

const api = new ApiClient("");
let ctx: AppContext | null = null;
let activeTab: Tab = "identify";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function renderTabs(): void {
  for (const tab of ["identify", "dashboard", "whatif"] as const) {
    el(`tab-${tab}`).classList.toggle("active", tab === activeTab);
  }
}

function renderStatus(): void {
  const status = el("status");
  if (!ctx) {
    status.textContent = "";
    return;
  }
  const state = ctx.session.hasPendingEdits
    ? "unsaved edits"
    : ctx.session.dirty
      ? "recompute needed"
      : "up to date";
  status.textContent = `${ctx.session.assessmentId} · ${state}`;
  status.className = ctx.session.dirty || ctx.session.hasPendingEdits ? "status stale" : "status fresh";
}

function render(): void {
  renderTabs();
  renderStatus();
  if (!ctx) {
    return;
  }
  const main = el("view");
  if (activeTab === "identify") {
    renderIdentify(main, ctx, render);
  } else if (activeTab === "dashboard") {
    renderDashboard(main, ctx, render);
  } else {
    renderWhatIf(main, ctx, render);
  }
}

async function openAssessment(assessmentId: string): Promise<void> {
  const [taxonomy, presetDoc] = await Promise.all([api.taxonomy(), api.threatActorPresets()]);
  const session = new UiSession(api, assessmentId);
  await session.load();
  await session.fetchReport(); // stale answers simply leave the session dirty
  ctx = {
    api,
    taxonomy,
    presets: presetDoc.threat_actors,
    session,
    domainNames: new Map(taxonomy.risk_domains.map((d) => [d.id, d.name])),
  };
  el("picker").hidden = true;
  el("app").hidden = false;
  render();
}

async function renderPicker(): Promise<void> {
  const picker = el("picker");
  const { assessments } = await api.listAssessments();
  const options = assessments
    .map((id) => `<li><button data-open="${id}">${id}</button></li>`)
    .join("");
  picker.innerHTML = `
    <section class="empty">
      <h2>Open an assessment</h2>
      ${assessments.length ? `<ul class="plain">${options}</ul>` : "<p class='muted'>No stored assessments yet.</p>"}
      <h3>or create one from a JSON document</h3>
      <textarea id="picker-doc" rows="8" placeholder='paste a full assessment document'></textarea>
      <div class="actions"><button id="picker-create" class="primary">Create</button></div>
      <p id="picker-error" class="field-error"></p>
    </section>`;

  for (const button of picker.querySelectorAll<HTMLButtonElement>("button[data-open]")) {
    button.addEventListener("click", () => void openAssessment(button.dataset.open ?? ""));
  }
  picker.querySelector("#picker-create")?.addEventListener("click", async () => {
    const errorBox = el("picker-error");
    errorBox.textContent = "";
    try {
      const doc = JSON.parse((el("picker-doc") as HTMLTextAreaElement).value);
      const { id } = await api.createAssessment(doc);
      await openAssessment(id);
    } catch (error) {
      if (error instanceof ApiError) {
        errorBox.textContent = `${error.message}: ${error.details.map((d) => `${d.path}: ${d.message}`).join("; ")}`;
      } else {
        errorBox.textContent = String(error);
      }
    }
  });
}

async function boot(): Promise<void> {
  for (const tab of ["identify", "dashboard", "whatif"] as const) {
    el(`tab-${tab}`).addEventListener("click", () => {
      activeTab = tab;
      render();
    });
  }
  try {
    const health = await api.health();
    el("catalog").textContent = `taxonomy ${health.taxonomy_version}`;
    await renderPicker();
  } catch {
    el("picker").innerHTML = "<section class='empty'><p class='field-error'>Cannot reach the assessment service.</p></section>";
  }
}

void boot();
