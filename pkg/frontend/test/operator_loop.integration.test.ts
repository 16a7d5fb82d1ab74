/** Operator loop against the real backend: spawns the monitor service and
 * the station simulator as child processes, clicks the panel's buttons, and
 * watches the served status flip to the corresponding paper state within
 * the 2 s budget. Requires the Python package to be installed (console
 * scripts atsu-service / gbas-sim on PATH). */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { renderOperatorPanel } from "../src/operator.js";
import type { StatusSnapshot } from "../src/types.js";

const UDP_PORT = 21611;
const HTTP_PORT = 18111;
const CONTROL_PORT = 18112;
const STATUS_BASE = `http://127.0.0.1:${HTTP_PORT}`;
const CONTROL_BASE = `http://127.0.0.1:${CONTROL_PORT}`;

let service: ChildProcess;
let sim: ChildProcess;

async function statusNow(): Promise<StatusSnapshot> {
  const resp = await fetch(`${STATUS_BASE}/api/status`);
  expect(resp.ok).toBe(true);
  return await resp.json() as StatusSnapshot;
}

async function waitFor<T>(probe: () => Promise<T | null>, timeoutMs: number,
                          what: string): Promise<{ value: T; elapsedMs: number }> {
  const started = Date.now();
  for (;;) {
    try {
      const value = await probe();
      if (value !== null) {
        return { value, elapsedMs: Date.now() - started };
      }
    } catch {
      // not up yet
    }
    if (Date.now() - started > timeoutMs) {
      throw new Error(`timed out waiting for ${what}`);
    }
    await new Promise((r) => setTimeout(r, 100));
  }
}

function clickAndAwait(panel: HTMLElement, command: string,
                       predicate: (s: StatusSnapshot) => boolean) {
  panel.querySelector<HTMLElement>(`[data-role=control-${command}]`)!.click();
  return waitFor(async () => {
    const snapshot = await statusNow();
    return predicate(snapshot) ? snapshot : null;
  }, 2000, `status change after ${command}`);
}

beforeAll(async () => {
  const logDir = mkdtempSync(join(tmpdir(), "atsu-ui-e2e-"));
  service = spawn("atsu-service", [
    "--listen", `127.0.0.1:${UDP_PORT}`,
    "--http", `127.0.0.1:${HTTP_PORT}`,
    "--log-dir", logDir,
  ], { stdio: "ignore" });
  sim = spawn("gbas-sim", [
    "--dest", `127.0.0.1:${UDP_PORT}`,
    "--control-http", `127.0.0.1:${CONTROL_PORT}`,
  ], { stdio: "ignore" });

  await waitFor(async () => (await fetch(`${STATUS_BASE}/api/health`)).ok ? true : null,
                10_000, "monitor service");
  await waitFor(async () => (await fetch(`${CONTROL_BASE}/control/state`)).ok ? true : null,
                10_000, "simulator control api");
  // first frames flowing
  await waitFor(async () =>
    (await statusNow()).connectivity === "CONNECTED" ? true : null,
    10_000, "first frame");
}, 30_000);

afterAll(() => {
  sim?.kill();
  service?.kill();
});

describe("operator loop against a live simulator", () => {
  it("drives alarm, test, normal, and outage states within 2 s each", async () => {
    const panel = renderOperatorPanel(CONTROL_BASE);
    document.body.append(panel);

    const alarm = await clickAndAwait(panel, "alarm",
      (s) => s.mode_panel.color === "RED" && s.approach_panel.color === "RED");
    expect(alarm.elapsedMs).toBeLessThan(2000);

    const test = await clickAndAwait(panel, "test",
      (s) => s.mode_panel.color === "RED" && s.approach_panel.color === "YELLOW");
    expect(test.elapsedMs).toBeLessThan(2000);

    const normal = await clickAndAwait(panel, "normal",
      (s) => s.mode_panel.color === "GREEN" && s.approach_panel.color === "GREEN");
    expect(normal.elapsedMs).toBeLessThan(2000);

    const before = Date.now();
    const outage = await clickAndAwait(panel, "outage",
      (s) => s.countdown !== null && s.approach_panel.color === "YELLOW");
    expect(outage.elapsedMs).toBeLessThan(2000);
    const countdown = outage.value.countdown!;
    expect(countdown.kind).toBe("TO_OUTAGE_START");
    // outage starts two minutes past the click, give or take the loop latency
    const lead = countdown.target - before;
    expect(lead).toBeGreaterThan(115_000);
    expect(lead).toBeLessThanOrEqual(122_500);
    expect(outage.value.message_block).toEqual(
      { text: "PREDICTED OUTAGE", color: "YELLOW" });
  }, 20_000);
});
