/** Integration against the real assessment service.
 *
 * Spawns the Python server, drives it through the UI's client/session layers,
 * and cross-checks the displayed numbers against the command-line tool on the
 * same bundle.
 */

import { execFile, spawn, type ChildProcess } from "node:child_process";
import { promises as fs } from "node:fs";
import os from "node:os";
import path from "node:path";
import { fileURLToPath } from "node:url";
import { promisify } from "node:util";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { domainBarRows, scatterRows, topControlRows } from "../src/charts.js";
import { fmt4 } from "../src/format.js";
import { UiSession } from "../src/state.js";
import type { AssessmentDoc, ReportDoc, TaxonomyDoc } from "../src/types.js";

const execFileAsync = promisify(execFile);

const ROOT = fileURLToPath(new URL("../..", import.meta.url));
const PYTHON = process.env.PYTHON ?? "python3";
const PORT = 8930 + (process.pid % 400);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess | null = null;
let serverLog = "";
let tmpDir = "";
let api: ApiClient;
let taxonomy: TaxonomyDoc;
let exampleDoc: AssessmentDoc;

async function waitForHealth(): Promise<void> {
  for (let attempt = 0; attempt < 200; attempt += 1) {
    try {
      const response = await fetch(`${BASE}/health`);
      if (response.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    await new Promise((resolve) => setTimeout(resolve, 100));
  }
  throw new Error(`service did not come up on ${BASE}\n${serverLog}`);
}

async function cli(args: string[]): Promise<string> {
  const { stdout } = await execFileAsync(PYTHON, ["-m", "iotraq.cli", ...args], { cwd: ROOT });
  return stdout;
}

function parseCliTable(stdout: string): string[][] {
  return stdout
    .trim()
    .split("\n")
    .slice(2) // header and rule
    .map((line) => line.trim().split(/\s{2,}/));
}

function parseCsv(text: string): string[][] {
  return text
    .trim()
    .split("\n")
    .slice(1)
    .map((line) => line.split(","));
}

beforeAll(async () => {
  tmpDir = await fs.mkdtemp(path.join(os.tmpdir(), "iotraq-ui-"));
  server = spawn(
    PYTHON,
    ["-m", "iotraq.cli", "serve", "--port", String(PORT), "--data-dir", path.join(tmpDir, "store")],
    { cwd: ROOT, stdio: ["ignore", "pipe", "pipe"] },
  );
  server.stdout?.on("data", (chunk) => (serverLog += chunk));
  server.stderr?.on("data", (chunk) => (serverLog += chunk));
  await waitForHealth();

  api = new ApiClient(BASE);
  taxonomy = await api.taxonomy();
  exampleDoc = JSON.parse(
    await fs.readFile(path.join(ROOT, "src", "iotraq", "data", "example_assessment.json"), "utf8"),
  ) as AssessmentDoc;
});

afterAll(async () => {
  server?.kill("SIGTERM");
  await fs.rm(tmpDir, { recursive: true, force: true });
});

describe("UI loop against the live service", () => {
  it("edit -> compute -> dashboard shows exactly what the CLI shows", async () => {
    const { id } = await api.createAssessment(exampleDoc);
    const session = new UiSession(api, id);
    await session.load();

    // consultant answers the questionnaire: signed updates now "Managed" (0.75)
    session.stageControlScore("ctrl.producer.tvm.signed-updates", 0.75);
    const report = await session.compute();
    expect(report).not.toBeNull();
    expect(session.canRenderReport).toBe(true);

    const domainNames = new Map(taxonomy.risk_domains.map((d) => [d.id, d.name]));
    const uiRows = domainBarRows(report!, domainNames).map((row) => [
      row.name,
      fmt4(row.inherent),
      fmt4(row.residual),
    ]);

    // the CLI recomputes the same (edited) bundle from scratch
    const edited = await api.getAssessment(id);
    expect(edited.control_scores.implementation["ctrl.producer.tvm.signed-updates"]).toBe(0.75);
    const bundlePath = path.join(tmpDir, "edited.json");
    await fs.writeFile(bundlePath, JSON.stringify(edited, null, 2));
    const cliRows = parseCliTable(await cli(["assess", bundlePath]));

    expect(uiRows).toEqual(cliRows);
  });

  it("a what-if leaves the stored report untouched", async () => {
    const { id } = await api.createAssessment(exampleDoc);
    const session = new UiSession(api, id);
    await session.load();
    const baseline = await session.compute();
    expect(baseline).not.toBeNull();

    const scenario = await session.exploreWhatIf(
      { "ctrl.consumer.systems.device-hardening": 0.3 },
      "exploration",
    );
    const touched = scenario.domain_reports.find((d) => d.risk_domain === "domain.systems-security")!;
    const base = baseline!.domain_reports.find((d) => d.risk_domain === "domain.systems-security")!;
    expect(touched.residual_normalized).toBeLessThan(base.residual_normalized);

    const stored = await api.report(id);
    expect(stored).toEqual(baseline);
  });

  it("chart data equals the CLI chart exports for the same report", async () => {
    const { id } = await api.createAssessment(exampleDoc);
    const report: ReportDoc = await api.compute(id);
    const reportPath = path.join(tmpDir, "report.json");
    await fs.writeFile(reportPath, JSON.stringify(report, null, 2));

    const domainNames = new Map(taxonomy.risk_domains.map((d) => [d.id, d.name]));
    const barRows = domainBarRows(report, domainNames);
    const barCsv = parseCsv(await cli(["export", reportPath, "--view", "domain_bars"]));
    expect(barCsv.map((row) => row[0])).toEqual(barRows.map((row) => row.domain));
    barCsv.forEach((row, index) => {
      expect(Number(row[1])).toBe(barRows[index]!.inherent);
      expect(Number(row[2])).toBe(barRows[index]!.residual);
    });

    const matrixRows = scatterRows(report);
    const matrixCsv = parseCsv(await cli(["export", reportPath, "--view", "risk_matrix"]));
    expect(matrixCsv.map((row) => row[0])).toEqual(matrixRows.map((row) => row.vulnerability));
    matrixCsv.forEach((row, index) => {
      expect(Number(row[1])).toBe(matrixRows[index]!.likelihood);
      expect(Number(row[2])).toBe(matrixRows[index]!.impact);
    });

    const topRows = topControlRows(report);
    const topCsv = parseCsv(await cli(["export", reportPath, "--view", "sensitivity_top_n"]));
    expect(topCsv.map((row) => row[1])).toEqual(topRows.map((row) => row.control));
    topCsv.forEach((row, index) => {
      expect(Number(row[2])).toBe(topRows[index]!.delta_residual_normalized);
    });
  });

  it("deselecting every threat actor blocks compute with an inline error", async () => {
    const { id } = await api.createAssessment(exampleDoc);
    const session = new UiSession(api, id);
    await session.load();
    const baseline = await session.compute();

    session.stageActorSelection([]);
    const blocked = await session.compute();
    expect(blocked).toBeNull();
    expect(session.errors.some((e) => e.path.includes("threat_actors"))).toBe(true);
    expect(session.hasPendingEdits).toBe(true);

    // the server state is untouched: the stored report still matches baseline
    expect(await api.report(id)).toEqual(baseline);
  });
});
