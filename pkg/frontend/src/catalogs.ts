/** Catalog tabs: the 35 service alerts and 6 alarms with their
 * descriptions. Selecting an entry and pressing Display pops its
 * description as a transient toast, like the original app. */

import type { Catalogs, StatusSnapshot } from "./types.js";

const TOAST_MS = 4000;

export async function fetchCatalogs(statusBase: string,
                                    fetchFn: typeof fetch = fetch): Promise<Catalogs> {
  const [alerts, alarms] = await Promise.all([
    fetchFn(`${statusBase}/api/alerts`).then((r) => {
      if (!r.ok) throw new Error(`alerts fetch failed: ${r.status}`);
      return r.json();
    }),
    fetchFn(`${statusBase}/api/alarms`).then((r) => {
      if (!r.ok) throw new Error(`alarms fetch failed: ${r.status}`);
      return r.json();
    }),
  ]);
  return { alerts, alarms };
}

export function showToast(text: string, host: HTMLElement = document.body): HTMLElement {
  const toast = document.createElement("div");
  toast.className = "toast";
  toast.dataset.role = "toast";
  toast.textContent = text;
  host.append(toast);
  setTimeout(() => toast.remove(), TOAST_MS);
  return toast;
}

export function renderCatalogTabs(catalogs: Catalogs): HTMLElement {
  const root = document.createElement("div");
  root.className = "catalogs";
  root.dataset.role = "catalogs";

  const tabBar = document.createElement("div");
  tabBar.className = "tab-bar";
  const panes: Record<string, HTMLElement> = {};
  let selected: { kind: string; entry: { id: number; description: string } } | null = null;

  for (const [kind, title, entries] of [
    ["alert", "Service Alerts", catalogs.alerts],
    ["alarm", "Alarms", catalogs.alarms],
  ] as const) {
    const tab = document.createElement("button");
    tab.className = "tab";
    tab.dataset.role = `tab-${kind}`;
    tab.textContent = `${title} (${entries.length})`;

    const pane = document.createElement("div");
    pane.className = "tab-pane";
    pane.dataset.role = `pane-${kind}`;
    for (const entry of entries) {
      const row = document.createElement("div");
      row.className = "catalog-row";
      row.dataset.role = `${kind}-row`;
      row.dataset.id = String(entry.id);
      row.textContent = `${entry.id}. ${entry.description}`;
      row.addEventListener("click", () => {
        pane.querySelectorAll(".catalog-row.selected")
            .forEach((n) => n.classList.remove("selected"));
        row.classList.add("selected");
        selected = { kind, entry };
      });
      pane.append(row);
    }
    panes[kind] = pane;
    tab.addEventListener("click", () => {
      Object.values(panes).forEach((p) => (p.style.display = "none"));
      tabBar.querySelectorAll(".tab.active").forEach((n) => n.classList.remove("active"));
      pane.style.display = "";
      tab.classList.add("active");
    });
    tabBar.append(tab);
    root.append(pane);
  }
  panes["alarm"].style.display = "none";
  root.prepend(tabBar);
  tabBar.querySelector<HTMLElement>("[data-role=tab-alert]")!.classList.add("active");

  const display = document.createElement("button");
  display.className = "display-button";
  display.dataset.role = "display-button";
  display.textContent = "Display";
  display.addEventListener("click", () => {
    if (selected !== null) {
      showToast(selected.entry.description);
    }
  });
  root.append(display);
  return root;
}

/** Highlight the catalog rows whose ids are active in the snapshot. */
export function highlightActive(root: HTMLElement, snapshot: StatusSnapshot): void {
  const active = {
    alert: new Set(snapshot.active_alerts.map((e) => e.id)),
    alarm: new Set(snapshot.active_alarms.map((e) => e.id)),
  };
  for (const kind of ["alert", "alarm"] as const) {
    root.querySelectorAll<HTMLElement>(`[data-role=${kind}-row]`).forEach((row) => {
      row.classList.toggle("active", active[kind].has(Number(row.dataset.id)));
    });
  }
}

/** Wrapper that loads the catalogs and re-offers a retry on failure. */
export async function mountCatalogs(host: HTMLElement, statusBase: string,
                                    fetchFn: typeof fetch = fetch): Promise<void> {
  host.replaceChildren();
  try {
    const catalogs = await fetchCatalogs(statusBase, fetchFn);
    host.replaceChildren(renderCatalogTabs(catalogs));
  } catch (err) {
    const failure = document.createElement("div");
    failure.className = "catalog-error";
    failure.dataset.role = "catalog-error";
    failure.textContent = `Could not load catalogs: ${err}`;
    const retry = document.createElement("button");
    retry.dataset.role = "catalog-retry";
    retry.textContent = "Retry";
    retry.addEventListener("click", () => void mountCatalogs(host, statusBase, fetchFn));
    failure.append(retry);
    host.replaceChildren(failure);
  }
}
