/** Startup configuration, fetched from ui-config.json next to the page. */

import type { UiConfig } from "./types.js";

const DEFAULTS: UiConfig = {
  statusBase: "http://127.0.0.1:8080",
  simControlBase: null,
};

export async function loadConfig(fetchFn: typeof fetch = fetch): Promise<UiConfig> {
  try {
    const resp = await fetchFn("./ui-config.json");
    if (!resp.ok) return DEFAULTS;
    const raw = await resp.json();
    return {
      statusBase: typeof raw.statusBase === "string" ? raw.statusBase : DEFAULTS.statusBase,
      simControlBase: typeof raw.simControlBase === "string" ? raw.simControlBase : null,
    };
  } catch {
    return DEFAULTS;
  }
}
