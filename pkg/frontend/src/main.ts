/** Console entry point: status display on the left, operator panel and
 * catalogs on the right, all fed by one snapshot stream. */

import { highlightActive, mountCatalogs } from "./catalogs.js";
import { loadConfig } from "./config.js";
import { renderOperatorPanel } from "./operator.js";
import { connectStatusStream } from "./stream.js";
import { renderStatus } from "./status_view.js";
import type { ViewModel } from "./types.js";

async function start(): Promise<void> {
  const app = document.getElementById("app");
  if (!app) throw new Error("missing #app mount point");
  const config = await loadConfig();

  const statusHost = document.createElement("div");
  statusHost.className = "pane pane--status";
  const sideHost = document.createElement("div");
  sideHost.className = "pane pane--side";
  app.replaceChildren(statusHost, sideHost);

  if (config.simControlBase !== null) {
    sideHost.append(renderOperatorPanel(config.simControlBase));
  }
  const catalogHost = document.createElement("div");
  sideHost.append(catalogHost);
  void mountCatalogs(catalogHost, config.statusBase);

  const view: ViewModel = { snapshot: null, link: "connecting" };
  const rerender = () => {
    statusHost.replaceChildren(renderStatus(view));
    if (view.snapshot !== null) {
      highlightActive(catalogHost, view.snapshot);
    }
  };
  rerender();

  connectStatusStream(config.statusBase, {
    onSnapshot: (snapshot) => {
      view.snapshot = snapshot;
      rerender();
    },
    onLink: (link) => {
      if (link !== view.link) {
        view.link = link;
        rerender();
      }
    },
  });
}

void start();
