/** Status pane: the monitor display itself.
 *
 * Presentation only. Every color comes straight from the server's
 * PanelColor values (exposed 1:1 via data-color attributes); the countdown
 * text is the server's formatted string; no status is derived client-side.
 */

import type { PanelColor, ViewModel } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function paintPanel(node: HTMLElement, color: PanelColor): void {
  node.dataset.color = color;
  node.classList.add(`c-${color}`);
}

function formatUtc(ms: number): string {
  return new Date(ms).toISOString().replace("T", " ").slice(0, 19) + " UTC";
}

const COUNTDOWN_CAPTIONS = {
  TO_OUTAGE_START: "TIME TO PREDICTED OUTAGE",
  TO_SERVICE_RETURN: "ESTIMATED RETURN TO SERVICE",
} as const;

export function renderStatus(view: ViewModel): HTMLElement {
  const root = el("div", "status-pane");
  root.dataset.role = "status-pane";

  if (view.link === "lost") {
    const banner = el("div", "link-banner", "MONITOR LINK LOST");
    banner.dataset.role = "link-banner";
    root.append(banner);
  }

  const snapshot = view.snapshot;
  if (snapshot === null) {
    root.append(el("div", "display display--waiting", "Connecting to monitor..."));
    return root;
  }

  const display = el("div", "display");
  display.dataset.role = "display";
  display.dataset.nodata = snapshot.connectivity === "NO_DATA" ? "true" : "false";

  const header = el("div", "display-header");
  header.append(
    el("span", "station", snapshot.station_id || "—"),
    el("span", "clock", formatUtc(snapshot.utc_clock)),
    el("span", "seq", snapshot.last_sequence ? `frame ${snapshot.last_sequence}` : ""),
  );
  display.append(header);

  const panels = el("div", "panels");
  const mode = el("div", "panel");
  mode.dataset.role = "mode-panel";
  mode.append(el("div", "panel-title", "GBAS MODE"),
              el("div", "panel-label", snapshot.mode_panel.label));
  paintPanel(mode, snapshot.mode_panel.color);

  const approach = el("div", "panel");
  approach.dataset.role = "approach-panel";
  approach.append(el("div", "panel-title", "GLS APPROACH"),
                  el("div", "panel-label", snapshot.approach_panel.label));
  paintPanel(approach, snapshot.approach_panel.color);
  panels.append(mode, approach);
  display.append(panels);

  if (snapshot.message_block !== null) {
    const block = el("div", "message-block", snapshot.message_block.text);
    block.dataset.role = "message-block";
    paintPanel(block, snapshot.message_block.color);
    display.append(block);
  }

  if (snapshot.countdown !== null) {
    const countdown = el("div", "countdown");
    countdown.dataset.role = "countdown";
    countdown.append(
      el("div", "countdown-caption", COUNTDOWN_CAPTIONS[snapshot.countdown.kind]),
      el("div", "countdown-text", snapshot.countdown.text),
    );
    countdown.querySelector<HTMLElement>(".countdown-text")!.dataset.role = "countdown-text";
    display.append(countdown);
  }

  const lists = el("div", "active-lists");
  for (const [role, title, entries] of [
    ["active-alerts", "ACTIVE SERVICE ALERTS", snapshot.active_alerts],
    ["active-alarms", "ACTIVE ALARMS", snapshot.active_alarms],
  ] as const) {
    const box = el("div", "active-list");
    box.dataset.role = role;
    box.append(el("div", "active-title", `${title} (${entries.length})`));
    for (const entry of entries) {
      box.append(el("div", "active-entry", `${entry.id}. ${entry.description}`));
    }
    lists.append(box);
  }
  display.append(lists);

  root.append(display);
  return root;
}
