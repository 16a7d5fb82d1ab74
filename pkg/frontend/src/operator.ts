/** Operator panel: the Normal / Alarm / Test / Outage / Reset buttons that
 * drive the station simulator's control API. Fire-and-confirm: buttons show
 * a pending state until the POST resolves; an unreachable simulator
 * disables the panel behind an error badge with a retry. */

const COMMANDS = ["NORMAL", "ALARM", "TEST", "OUTAGE", "RESET"] as const;

export function renderOperatorPanel(controlBase: string,
                                    fetchFn: typeof fetch = fetch): HTMLElement {
  const root = document.createElement("div");
  root.className = "operator-panel";
  root.dataset.role = "operator-panel";
  root.append(Object.assign(document.createElement("div"),
                            { className: "operator-title", textContent: "STATION CONTROL" }));

  const badge = document.createElement("button");
  badge.className = "error-badge";
  badge.dataset.role = "operator-error";
  badge.style.display = "none";
  badge.title = "Retry";

  const buttons: HTMLButtonElement[] = [];
  const setDisabled = (disabled: boolean) => {
    buttons.forEach((b) => (b.disabled = disabled));
    root.dataset.link = disabled ? "error" : "ok";
    badge.style.display = disabled ? "" : "none";
  };

  const send = async (command: string, button?: HTMLButtonElement) => {
    button?.classList.add("pending");
    try {
      const resp = await fetchFn(`${controlBase}/control/${command.toLowerCase()}`,
                                 { method: "POST" });
      if (!resp.ok) throw new Error(`control POST failed: ${resp.status}`);
      setDisabled(false);
    } catch (err) {
      badge.textContent = `SIMULATOR UNREACHABLE (${err}) - retry`;
      setDisabled(true);
    } finally {
      button?.classList.remove("pending");
    }
  };

  for (const command of COMMANDS) {
    const button = document.createElement("button");
    button.className = "operator-button";
    button.dataset.role = `control-${command.toLowerCase()}`;
    button.textContent = command.charAt(0) + command.slice(1).toLowerCase();
    button.addEventListener("click", () => void send(command, button));
    buttons.push(button);
    root.append(button);
  }

  badge.addEventListener("click", () => {
    // A probe GET re-enables the panel once the simulator answers again.
    fetchFn(`${controlBase}/control/state`)
      .then((r) => setDisabled(!r.ok))
      .catch(() => setDisabled(true));
  });
  root.append(badge);
  return root;
}
